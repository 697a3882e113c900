#include "boxlab/box.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace boxlab {

namespace {

// Validate one flattened table in place: clamp entries in [-tol, 0) to 0,
// reject entries below -tol, reject rows whose sum is off beyond kNormTol.
template <std::size_t N>
void validate_table(std::array<double, N>& p, int rows, int cols, double tol) {
    for (std::size_t k = 0; k < N; ++k) {
        if (p[k] < -tol) {
            throw NegativeProbability("probability entry " + std::to_string(p[k]) +
                                      " below -" + std::to_string(tol));
        }
        if (p[k] < 0.0) p[k] = 0.0;
    }
    for (int r = 0; r < rows; ++r) {
        double sum = 0.0;
        for (int c = 0; c < cols; ++c) sum += p[r * cols + c];
        if (std::abs(sum - 1.0) > kNormTol) {
            throw NotNormalized("row " + std::to_string(r) + " sums to " +
                                std::to_string(sum));
        }
    }
}

}  // namespace

Box3::Box3(const std::array<double, kSize>& flat, double tol) : p_(flat) {
    validate_table(p_, kRows, kCols, tol);
}

Box2::Box2(const std::array<double, kSize>& flat, double tol) : p_(flat) {
    validate_table(p_, kRows, kCols, tol);
}

Box3 make_box3(const std::array<std::array<double, 8>, 8>& rows, double tol) {
    std::array<double, Box3::kSize> flat{};
    for (int r = 0; r < 8; ++r)
        for (int c = 0; c < 8; ++c) flat[r * 8 + c] = rows[r][c];
    return Box3(flat, tol);
}

Box2 make_box2(const std::array<std::array<double, 4>, 4>& rows, double tol) {
    std::array<double, Box2::kSize> flat{};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) flat[r * 4 + c] = rows[r][c];
    return Box2(flat, tol);
}

namespace {

// Marginal of the outcome bits in `subset` at the full input assignment
// `in`, with kept outcomes fixed to `out_kept`.
double marginal3(const Box3& b, const std::array<bool, 3>& subset,
                 const std::array<int, 3>& out_kept, const std::array<int, 3>& in) {
    const int row = Box3::row_index(in[0], in[1], in[2]);
    double sum = 0.0;
    for (int o1 = 0; o1 < 2; ++o1)
        for (int o2 = 0; o2 < 2; ++o2)
            for (int o3 = 0; o3 < 2; ++o3) {
                const std::array<int, 3> o{o1, o2, o3};
                bool match = true;
                for (int k = 0; k < 3; ++k)
                    if (subset[k] && o[k] != out_kept[k]) match = false;
                if (match) sum += b.at(row, Box3::col_index(o1, o2, o3));
            }
    return sum;
}

struct Scan3Result {
    NsReport report;
    NsViolationFunctional functional;
};

Scan3Result scan_ns3(const Box3& b, double tol) {
    Scan3Result res;
    double best = 0.0;
    for (int mask = 1; mask < 7; ++mask) {  // nonempty proper subsets
        std::array<bool, 3> subset{(mask & 1) != 0, (mask & 2) != 0, (mask & 4) != 0};
        for (int k = 0; k < 3; ++k) {
            if (subset[k]) continue;
            // Inputs of every party except k range over everything; k flips.
            for (int rest = 0; rest < 4; ++rest) {
                std::array<int, 3> in{};
                int bit = 0;
                for (int p = 0; p < 3; ++p)
                    if (p != k) in[p] = (rest >> bit++) & 1;
                for (int om = 0; om < 8; ++om) {
                    std::array<int, 3> out{(om >> 2) & 1, (om >> 1) & 1, om & 1};
                    bool redundant = false;
                    for (int p = 0; p < 3; ++p)
                        if (!subset[p] && out[p] != 0) redundant = true;
                    if (redundant) continue;
                    std::array<int, 3> in0 = in, in1 = in;
                    in0[k] = 0;
                    in1[k] = 1;
                    const double d =
                        marginal3(b, subset, out, in1) - marginal3(b, subset, out, in0);
                    if (std::abs(d) > best) {
                        best = std::abs(d);
                        int marg_party = 0;
                        while (!subset[marg_party]) ++marg_party;
                        res.report.violating_party = marg_party + 1;

                        NsViolationFunctional f;
                        f.value = std::abs(d);
                        f.flipping_party = k;
                        f.marginal_subset = subset;
                        const double sign = d > 0 ? 1.0 : -1.0;
                        const int r1 = Box3::row_index(in1[0], in1[1], in1[2]);
                        const int r0 = Box3::row_index(in0[0], in0[1], in0[2]);
                        for (int o1 = 0; o1 < 2; ++o1)
                            for (int o2 = 0; o2 < 2; ++o2)
                                for (int o3 = 0; o3 < 2; ++o3) {
                                    const std::array<int, 3> o{o1, o2, o3};
                                    bool match = true;
                                    for (int p = 0; p < 3; ++p)
                                        if (subset[p] && o[p] != out[p]) match = false;
                                    if (!match) continue;
                                    const int c = Box3::col_index(o1, o2, o3);
                                    f.coeffs[r1 * 8 + c] += sign;
                                    f.coeffs[r0 * 8 + c] -= sign;
                                }
                        res.functional = f;
                    }
                }
            }
        }
    }
    res.report.max_violation = best;
    res.report.is_ns = best <= tol;
    if (res.report.is_ns) res.report.violating_party.reset();
    return res;
}

}  // namespace

NsReport no_signaling_check(const Box3& b, double tol) {
    return scan_ns3(b, tol).report;
}

NsViolationFunctional max_ns_violation(const Box3& b) {
    return scan_ns3(b, 0.0).functional;
}

NsReport no_signaling_check(const Box2& b, double tol) {
    NsReport rep;
    double best = 0.0;
    // Party 1 marginal vs party 2 input and vice versa.
    for (int party = 0; party < 2; ++party) {
        const int other = 1 - party;
        for (int i_self = 0; i_self < 2; ++i_self)
            for (int o_self = 0; o_self < 2; ++o_self) {
                double m[2];
                for (int i_other = 0; i_other < 2; ++i_other) {
                    std::array<int, 2> in{};
                    in[party] = i_self;
                    in[other] = i_other;
                    double sum = 0.0;
                    for (int o_other = 0; o_other < 2; ++o_other) {
                        std::array<int, 2> out{};
                        out[party] = o_self;
                        out[other] = o_other;
                        sum += b.prob(out[0], out[1], in[0], in[1]);
                    }
                    m[i_other] = sum;
                }
                const double d = std::abs(m[1] - m[0]);
                if (d > best) {
                    best = d;
                    rep.violating_party = party + 1;
                }
            }
    }
    rep.max_violation = best;
    rep.is_ns = best <= tol;
    if (rep.is_ns) rep.violating_party.reset();
    return rep;
}

namespace {

template <class BoxT, std::size_t N>
BoxT mix_impl(std::span<const BoxT> boxes, std::span<const double> weights) {
    if (boxes.empty() || boxes.size() != weights.size())
        throw BadWeights("boxes/weights length mismatch");
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw BadWeights("negative weight " + std::to_string(w));
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw BadWeights("weights sum to " + std::to_string(sum));
    std::array<double, N> acc{};
    for (std::size_t j = 0; j < boxes.size(); ++j) {
        const auto flat = boxes[j].flat();
        for (std::size_t k = 0; k < N; ++k) acc[k] += weights[j] * flat[k];
    }
    return BoxT(acc);
}

}  // namespace

Box3 mix(std::span<const Box3> boxes, std::span<const double> weights) {
    return mix_impl<Box3, Box3::kSize>(boxes, weights);
}

Box2 mix(std::span<const Box2> boxes, std::span<const double> weights) {
    return mix_impl<Box2, Box2::kSize>(boxes, weights);
}

double max_abs_diff(const Box3& a, const Box3& b) {
    double m = 0.0;
    for (int k = 0; k < Box3::kSize; ++k)
        m = std::max(m, std::abs(a.flat()[k] - b.flat()[k]));
    return m;
}

double max_abs_diff(const Box2& a, const Box2& b) {
    double m = 0.0;
    for (int k = 0; k < Box2::kSize; ++k)
        m = std::max(m, std::abs(a.flat()[k] - b.flat()[k]));
    return m;
}

namespace {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string serialize_table(int parties, const double* p, int rows, int cols) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"scenario\": { \"parties\": " << parties
       << ", \"inputs\": 2, \"outputs\": 2 },\n";
    os << "  \"ordering\": \"dictionary\",\n";
    os << "  \"probabilities\": [\n";
    for (int r = 0; r < rows; ++r) {
        os << "    [";
        for (int c = 0; c < cols; ++c) {
            os << format_double(p[r * cols + c]);
            if (c + 1 < cols) os << ", ";
        }
        os << (r + 1 < rows ? "],\n" : "]\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

}  // namespace

std::string serialize(const Box3& b) {
    return serialize_table(3, b.flat().data(), Box3::kRows, Box3::kCols);
}

std::string serialize(const Box2& b) {
    return serialize_table(2, b.flat().data(), Box2::kRows, Box2::kCols);
}

std::variant<Box3, Box2> deserialize_box(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid box text: ") + e.what());
    }
    if (!j.is_object() || !j.contains("scenario") || !j.contains("probabilities"))
        throw ParseError("box text missing scenario or probabilities");
    const auto& sc = j["scenario"];
    if (!sc.contains("parties") || !sc["parties"].is_number_integer())
        throw ParseError("scenario.parties missing");
    const int parties = sc["parties"].get<int>();
    if (parties != 2 && parties != 3) throw ParseError("scenario.parties must be 2 or 3");
    if (sc.value("inputs", 2) != 2 || sc.value("outputs", 2) != 2)
        throw ParseError("only 2-input/2-output scenarios are supported");
    if (j.value("ordering", "dictionary") != std::string("dictionary"))
        throw ParseError("ordering must be \"dictionary\"");
    const auto& pr = j["probabilities"];
    const int n = parties == 3 ? 8 : 4;
    if (!pr.is_array() || static_cast<int>(pr.size()) != n)
        throw ParseError("probabilities must have " + std::to_string(n) + " rows");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : pr) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            throw ParseError("each probability row must have " + std::to_string(n) +
                             " entries");
        for (const auto& v : row) {
            if (!v.is_number()) throw ParseError("non-numeric probability entry");
            flat.push_back(v.get<double>());
        }
    }
    if (parties == 3) {
        std::array<double, Box3::kSize> a{};
        std::copy(flat.begin(), flat.end(), a.begin());
        return Box3(a);
    }
    std::array<double, Box2::kSize> a{};
    std::copy(flat.begin(), flat.end(), a.begin());
    return Box2(a);
}

Box3 deserialize_box3(const std::string& text) {
    auto v = deserialize_box(text);
    if (auto* b = std::get_if<Box3>(&v)) return *b;
    throw ParseError("expected a tripartite box, found a bipartite one");
}

Box2 deserialize_box2(const std::string& text) {
    auto v = deserialize_box(text);
    if (auto* b = std::get_if<Box2>(&v)) return *b;
    throw ParseError("expected a bipartite box, found a tripartite one");
}

}  // namespace boxlab
