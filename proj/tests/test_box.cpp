#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "boxlab/box.hpp"
#include "boxlab/constructors.hpp"

using namespace boxlab;

namespace {

const double kAp = 0.25 * (1.0 + 1.0 / std::sqrt(2.0));
const double kAm = 0.25 * (1.0 - 1.0 / std::sqrt(2.0));

// The GHZ correlation table entered literally (prefactor applied), used as
// an oracle independent of the projective constructor.
Box3 printed_ghz() {
    const double p = kAp, m = kAm;
    std::array<std::array<double, 8>, 8> rows = {{
        {2 * p, 2 * m, 0, 0, 0, 0, 2 * m, 2 * p},
        {2 * p, 2 * m, 0, 0, 0, 0, 2 * m, 2 * p},
        {p, m, p, m, m, p, m, p},
        {p, m, p, m, m, p, m, p},
        {p, m, m, p, p, m, m, p},
        {p, m, m, p, p, m, m, p},
        {p, m, m, p, m, p, p, m},
        {m, p, p, m, p, m, m, p},
    }};
    for (auto& r : rows)
        for (auto& v : r) v *= 0.5;
    return make_box3(rows);
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

}  // namespace

TEST_CASE("uniform table is a valid box") {
    std::array<double, 64> flat{};
    flat.fill(1.0 / 8.0);
    const Box3 b(flat);
    CHECK(b.at(3, 5) == 1.0 / 8.0);
    CHECK(b.prob(1, 0, 1, 0, 1, 1) == 1.0 / 8.0);
}

TEST_CASE("GHZ table validates and keeps its entries") {
    const Box3 b = printed_ghz();
    CHECK(b.at(0, 0) == doctest::Approx(0.4267766953).epsilon(1e-9));
    CHECK(b.at(0, 2) == 0.0);
    CHECK(b.prob(0, 0, 0, 0, 1, 0) == doctest::Approx(kAp / 2).epsilon(1e-12));
}

TEST_CASE("row off normalization is rejected") {
    std::array<std::array<double, 8>, 8> rows{};
    for (auto& r : rows) r[0] = 1.0;
    rows[4][1] = 0.1;  // row sums to 1.1
    CHECK_THROWS_AS(make_box3(rows), NotNormalized);
}

TEST_CASE("tiny negatives clamp, real negatives reject") {
    std::array<std::array<double, 8>, 8> rows{};
    for (auto& r : rows) r[0] = 1.0;
    rows[0][0] = 1.0 + 1e-13;
    rows[0][1] = -1e-13;
    const Box3 b = make_box3(rows);
    CHECK(b.at(0, 1) == 0.0);

    rows[0][1] = -1e-3;
    rows[0][0] = 1.0 + 1e-3;
    CHECK_THROWS_AS(make_box3(rows), NegativeProbability);
}

TEST_CASE("no-signaling check on named boxes") {
    const auto rep = no_signaling_check(printed_ghz(), 1e-12);
    CHECK(rep.is_ns);
    CHECK(rep.max_violation < 1e-12);
    CHECK_FALSE(rep.violating_party.has_value());

    // o3 = i2 with o1 = o2 = 0: party 3's marginal reacts to party 2's input.
    std::array<double, 64> flat{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int i3 = 0; i3 < 2; ++i3)
                flat[Box3::row_index(i1, i2, i3) * 8 + Box3::col_index(0, 0, i2)] = 1.0;
    const auto bad = no_signaling_check(Box3(flat), 1e-9);
    CHECK_FALSE(bad.is_ns);
    CHECK(bad.max_violation == doctest::Approx(1.0));
    CHECK(bad.violating_party == 3);

    CHECK(no_signaling_check(p_eps_left(EpsParams(0.5)), 1e-12).is_ns);
}

TEST_CASE("no-signaling family sweep") {
    for (double eps = 0.0; eps <= 1.0001; eps += 0.1) {
        const double e = std::min(eps, 1.0);
        for (double alpha = 0.0; alpha <= 1.0001; alpha += 0.1) {
            const auto rep = no_signaling_check(
                p_eps_alpha(EpsParams(e), std::min(alpha, 1.0)), 1e-12);
            CAPTURE(e);
            CAPTURE(alpha);
            CHECK(rep.max_violation < 1e-12);
        }
    }
}

TEST_CASE("mix basics") {
    const Box3 g = printed_ghz();
    const Box3 n = noise_box();

    const std::array<Box3, 2> same{g, g};
    const std::array<double, 2> half{0.5, 0.5};
    CHECK(max_abs_diff(mix(std::span<const Box3>(same), half), g) == 0.0);

    const std::array<Box3, 1> one{g};
    const std::array<double, 1> unit{1.0};
    CHECK(max_abs_diff(mix(std::span<const Box3>(one), unit), g) == 0.0);

    const std::array<Box3, 2> pair{g, n};
    CHECK_THROWS_AS(mix(std::span<const Box3>(pair), std::array<double, 2>{0.7, 0.4}),
                    BadWeights);
    CHECK_THROWS_AS(mix(std::span<const Box3>(pair), std::array<double, 2>{-0.1, 1.1}),
                    BadWeights);
    CHECK_THROWS_AS(mix(std::span<const Box3>(pair), std::array<double, 1>{1.0}),
                    BadWeights);
}

TEST_CASE("mix is associative in distribution") {
    const Box3 a = printed_ghz();
    const Box3 b = noise_box();
    const Box3 c = p_eps_left(EpsParams(0.3));
    const std::array<double, 3> w{0.2, 0.5, 0.3};

    const std::array<Box3, 3> all{a, b, c};
    const Box3 direct = mix(std::span<const Box3>(all), w);

    const std::array<Box3, 2> ab{a, b};
    const std::array<double, 2> wab{w[0] / (w[0] + w[1]), w[1] / (w[0] + w[1])};
    const Box3 inner = mix(std::span<const Box3>(ab), wab);
    const std::array<Box3, 2> ic{inner, c};
    const std::array<double, 2> wic{w[0] + w[1], w[2]};
    const Box3 nested = mix(std::span<const Box3>(ic), wic);

    CHECK(max_abs_diff(direct, nested) < 1e-12);
}

TEST_CASE("random local mixtures stay valid") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> code4(0, 3);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<Box3> parts;
        for (int k = 0; k < 5; ++k)
            parts.push_back(tensor_product(det_box1(code4(rng)),
                                           det_box2_local(code4(rng), code4(rng))));
        const auto w = random_weights(rng, parts.size());
        const Box3 m = mix(std::span<const Box3>(parts), w);
        for (int e = 0; e < Box3::kSize; ++e) {
            CHECK(m.flat()[e] >= 0.0);
            CHECK(m.flat()[e] <= 1.0);
        }
        for (int r = 0; r < 8; ++r) {
            double sum = 0.0;
            for (int c = 0; c < 8; ++c) sum += m.at(r, c);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("serialization round trip is exact") {
    const Box3 g = printed_ghz();
    const Box3 back = deserialize_box3(serialize(g));
    for (int k = 0; k < Box3::kSize; ++k) CHECK(back.flat()[k] == g.flat()[k]);

    // Canonical formatting: serializing the parsed box reproduces the text.
    CHECK(serialize(back) == serialize(g));

    const Box2 q = pr_box(1, 0, 1);
    const Box2 qback = deserialize_box2(serialize(q));
    for (int k = 0; k < Box2::kSize; ++k) CHECK(qback.flat()[k] == q.flat()[k]);
}

TEST_CASE("deserialize rejects malformed input") {
    CHECK_THROWS_AS(deserialize_box("not json"), ParseError);
    CHECK_THROWS_AS(deserialize_box("{}"), ParseError);

    // 7-row probability table
    std::string text = R"({"scenario":{"parties":3,"inputs":2,"outputs":2},
      "ordering":"dictionary","probabilities":[)";
    for (int r = 0; r < 7; ++r) {
        text += "[1,0,0,0,0,0,0,0]";
        if (r < 6) text += ",";
    }
    text += "]}";
    CHECK_THROWS_AS(deserialize_box(text), ParseError);

    CHECK_THROWS_AS(deserialize_box3(serialize(pr_box(0, 0, 0))), ParseError);
    CHECK_THROWS_AS(deserialize_box2(serialize(noise_box())), ParseError);
}
