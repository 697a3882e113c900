#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "boxlab/bell.hpp"
#include "boxlab/constructors.hpp"
#include "boxlab/wiring.hpp"

using namespace boxlab;

namespace {

Box2 uniform_box2() {
    std::array<double, Box2::kSize> flat{};
    flat.fill(0.25);
    return Box2(flat);
}

std::vector<double> random_weights(std::mt19937& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    for (auto& v : w) {
        v = -std::log(u(rng) + 1e-300);
        sum += v;
    }
    for (auto& v : w) v /= sum;
    return w;
}

// Input flips and (input-conditioned) output flips of either party; each
// maps the CHSH variant family onto itself.
Box2 relabel(const Box2& b, int flip_x, int flip_y, int ox_mask, int oy_mask) {
    std::array<double, Box2::kSize> flat{};
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int o = 0; o < 2; ++o)
                for (int op = 0; op < 2; ++op) {
                    const int nx = x ^ flip_x, ny = y ^ flip_y;
                    const int no = o ^ ((ox_mask >> x) & 1);
                    const int nop = op ^ ((oy_mask >> y) & 1);
                    flat[(2 * nx + ny) * 4 + (2 * no + nop)] = b.prob(o, op, x, y);
                }
    return Box2(flat);
}

}  // namespace

TEST_CASE("variant validation") {
    CHECK_THROWS_AS(ChshVariant({1, 1, 1, 1}), Error);
    CHECK_THROWS_AS(ChshVariant({1, 1, -1, -1}), Error);
    CHECK_THROWS_AS(ChshVariant({1, 1, 2, -1}), Error);
    CHECK(chsh_variants().size() == 8);
    for (const auto& v : chsh_variants()) {
        int negatives = 0;
        for (int s : v.signs) negatives += s == -1;
        CHECK(negatives % 2 == 1);
    }
}

TEST_CASE("PR box correlators and maximum") {
    const Box2 pr = pr_box(0, 0, 0);
    CHECK(correlator(pr, 0, 0) == doctest::Approx(1.0));
    CHECK(correlator(pr, 0, 1) == doctest::Approx(1.0));
    CHECK(correlator(pr, 1, 0) == doctest::Approx(1.0));
    CHECK(correlator(pr, 1, 1) == doctest::Approx(-1.0));
    CHECK(chsh_max(pr) == doctest::Approx(4.0));
}

TEST_CASE("uniform box has vanishing correlators") {
    const Box2 u = uniform_box2();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) CHECK(correlator(u, x, y) == doctest::Approx(0.0));
    CHECK(chsh_value(u, canonical_chsh_variant()) == doctest::Approx(0.0));
}

TEST_CASE("local deterministic boxes reach exactly 2") {
    for (int f = 0; f < 4; ++f)
        for (int g = 0; g < 4; ++g)
            CHECK(chsh_max(det_box2_local(f, g)) == doctest::Approx(2.0));
}

TEST_CASE("canonical variant reproduces both closed forms") {
    CHECK(canonical_chsh_variant().signs == std::array<int, 4>{1, 1, -1, 1});
    for (double eps = 0.0; eps <= 1.0001; eps += 0.1) {
        const double e = std::min(eps, 1.0);
        for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            const Box3 p = p_eps_alpha(EpsParams(e), a);
            CHECK(chsh_value(wire_3to2(p), canonical_chsh_variant()) ==
                  doctest::Approx(a + e * (3 - 2 * a)).epsilon(1e-9));
            CHECK(chsh_value(wire_2to3(p), canonical_chsh_variant()) ==
                  doctest::Approx((1 - a) + e * (1 + 2 * a)).epsilon(1e-9));
        }
    }
}

TEST_CASE("correlators of the wired GHZ box feed the 3/sqrt2 value") {
    const Box2 q = wire_2to3(ghz_box());
    double direct = 0.0;
    const auto& v = canonical_chsh_variant();
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            double e = 0.0;
            for (int o = 0; o < 2; ++o)
                for (int op = 0; op < 2; ++op)
                    e += ((o ^ op) ? -1.0 : 1.0) * q.prob(o, op, x, y);
            direct += v.signs[2 * x + y] * e;
        }
    CHECK(direct == doctest::Approx(3.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("values stay within the algebraic bounds") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> ext(0, 23);
    for (int rep = 0; rep < 100; ++rep) {
        std::vector<Box2> parts;
        for (int k = 0; k < 4; ++k) {
            const int e = ext(rng);
            parts.push_back(e < 16 ? det_box2_local(e / 4, e % 4)
                                   : pr_box((e - 16) >> 2 & 1, (e - 16) >> 1 & 1,
                                            (e - 16) & 1));
        }
        const auto w = random_weights(rng, parts.size());
        const Box2 b = mix(std::span<const Box2>(parts), w);
        for (const auto& v : chsh_variants()) CHECK(std::abs(chsh_value(b, v)) <= 4.0 + 1e-12);
    }
}

TEST_CASE("mixtures of the 16 local deterministic boxes respect the local bound") {
    std::mt19937 rng(6);
    std::uniform_int_distribution<int> code4(0, 3);
    for (int rep = 0; rep < 200; ++rep) {
        std::vector<Box2> parts;
        for (int k = 0; k < 5; ++k)
            parts.push_back(det_box2_local(code4(rng), code4(rng)));
        const auto w = random_weights(rng, parts.size());
        const Box2 b = mix(std::span<const Box2>(parts), w);
        CHECK(chsh_max(b) <= 2.0 + 1e-9);
    }
}

TEST_CASE("chsh_max is invariant under relabelings") {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> ext(0, 23);
    std::uniform_int_distribution<int> bit(0, 1);
    std::uniform_int_distribution<int> mask(0, 3);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Box2> parts;
        for (int k = 0; k < 3; ++k) {
            const int e = ext(rng);
            parts.push_back(e < 16 ? det_box2_local(e / 4, e % 4)
                                   : pr_box((e - 16) >> 2 & 1, (e - 16) >> 1 & 1,
                                            (e - 16) & 1));
        }
        const auto w = random_weights(rng, parts.size());
        const Box2 b = mix(std::span<const Box2>(parts), w);
        const Box2 r = relabel(b, bit(rng), bit(rng), mask(rng), mask(rng));
        CHECK(chsh_max(r) == doctest::Approx(chsh_max(b)).epsilon(1e-12));
    }
}
