#include <doctest.h>

#include <litetrack/geometry.hpp>

#include <random>

using namespace litetrack;

TEST_CASE("iou golden cases") {
    const BBox a{0, 0, 10, 10};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(a, BBox{20, 20, 5, 5}) == 0.0);
    // overlap 50, union 150
    CHECK(iou(a, BBox{5, 0, 10, 10}) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("iou symmetry and range on random boxes") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-50.0, 50.0);
    std::uniform_real_distribution<double> ext(0.5, 40.0);
    for (int i = 0; i < 500; ++i) {
        const BBox a{pos(rng), pos(rng), ext(rng), ext(rng)};
        const BBox b{pos(rng), pos(rng), ext(rng), ext(rng)};
        const double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("tlwh to xyah golden cases") {
    const Xyah m = tlwh_to_xyah(BBox{0, 0, 10, 20});
    CHECK(m.cx == doctest::Approx(5.0));
    CHECK(m.cy == doctest::Approx(10.0));
    CHECK(m.aspect == doctest::Approx(0.5));
    CHECK(m.height == doctest::Approx(20.0));

    const Xyah s = tlwh_to_xyah(BBox{-5, -5, 10, 10});
    CHECK(s.cx == doctest::Approx(0.0));
    CHECK(s.cy == doctest::Approx(0.0));
    CHECK(s.aspect == doctest::Approx(1.0));
    CHECK(s.height == doctest::Approx(10.0));
}

TEST_CASE("tlwh <-> xyah round trip on 1000 random boxes") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-500.0, 1500.0);
    std::uniform_real_distribution<double> ext(0.1, 300.0);
    double max_err = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const BBox b{pos(rng), pos(rng), ext(rng), ext(rng)};
        const BBox back = xyah_to_tlwh(tlwh_to_xyah(b));
        max_err = std::max(max_err, std::abs(back.x - b.x));
        max_err = std::max(max_err, std::abs(back.y - b.y));
        max_err = std::max(max_err, std::abs(back.w - b.w));
        max_err = std::max(max_err, std::abs(back.h - b.h));
    }
    CHECK(max_err < 1e-9);
}

TEST_CASE("tlbr conversion round trip") {
    const BBox b = BBox::from_tlbr(3.5, -2.0, 10.0, 8.25);
    CHECK(b.x == doctest::Approx(3.5));
    CHECK(b.y == doctest::Approx(-2.0));
    CHECK(b.right() == doctest::Approx(10.0));
    CHECK(b.bottom() == doctest::Approx(8.25));
}

TEST_CASE("descriptor normalization") {
    Eigen::VectorXf v = Eigen::VectorXf::Constant(48, 2.0f);
    const Descriptor d = Descriptor::normalized_from(v);
    CHECK(d.valid);
    CHECK(d.values.norm() == doctest::Approx(1.0).epsilon(1e-6));

    const Descriptor zero = Descriptor::normalized_from(Eigen::VectorXf::Zero(48));
    CHECK_FALSE(zero.valid);
    CHECK(zero.values.norm() == 0.0f);
}
