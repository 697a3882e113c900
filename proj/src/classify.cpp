#include "boxlab/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

namespace boxlab {

const char* class_name(HierarchyClass c) {
    switch (c) {
        case HierarchyClass::FL: return "FL";
        case HierarchyClass::NSBL: return "NSBL";
        case HierarchyClass::TOBL: return "TOBL";
        case HierarchyClass::ATOBL_LEFT: return "ATOBL_LEFT";
        case HierarchyClass::ATOBL_RIGHT: return "ATOBL_RIGHT";
        case HierarchyClass::ATOBL_UNION: return "ATOBL_UNION";
        case HierarchyClass::ATOBL_HULL: return "ATOBL_HULL";
        case HierarchyClass::BL: return "BL";
        case HierarchyClass::NS: return "NS";
    }
    return "?";
}

std::optional<HierarchyClass> class_from_name(const std::string& name) {
    static const std::vector<HierarchyClass> all = {
        HierarchyClass::FL,         HierarchyClass::NSBL,
        HierarchyClass::TOBL,       HierarchyClass::ATOBL_LEFT,
        HierarchyClass::ATOBL_RIGHT, HierarchyClass::ATOBL_UNION,
        HierarchyClass::ATOBL_HULL, HierarchyClass::BL,
        HierarchyClass::NS};
    for (auto c : all)
        if (name == class_name(c)) return c;
    return std::nullopt;
}

const std::vector<Box2>& ns_bipartite_extremals() {
    static const std::vector<Box2> extremals = [] {
        std::vector<Box2> out;
        out.reserve(24);
        for (int f2 = 0; f2 < 4; ++f2)
            for (int f3 = 0; f3 < 4; ++f3) out.push_back(det_box2_local(f2, f3));
        for (int v = 0; v < 8; ++v)
            out.push_back(pr_box((v >> 2) & 1, (v >> 1) & 1, v & 1));
        return out;
    }();
    return extremals;
}

namespace {

VertexSet build_vertices(HierarchyClass c) {
    VertexSet set;
    set.cls = c;
    auto add = [&set](int a, StrategyKind kind, int ca, int cb, const Box2& q) {
        set.vertices.push_back(tensor_product(det_box1(a), q));
        set.descriptors.push_back({a, kind, ca, cb});
    };
    switch (c) {
        case HierarchyClass::FL:
            for (int a = 0; a < 4; ++a)
                for (int f2 = 0; f2 < 4; ++f2)
                    for (int f3 = 0; f3 < 4; ++f3)
                        add(a, StrategyKind::LocalDet, f2, f3, det_box2_local(f2, f3));
            break;
        case HierarchyClass::NSBL:
            for (int a = 0; a < 4; ++a) {
                const auto& ext = ns_bipartite_extremals();
                for (int e = 0; e < 24; ++e) {
                    const bool pr = e >= 16;
                    add(a, pr ? StrategyKind::PR : StrategyKind::LocalDet,
                        pr ? e - 16 : e / 4, pr ? -1 : e % 4, ext[e]);
                }
            }
            break;
        case HierarchyClass::ATOBL_LEFT:
            for (int a = 0; a < 4; ++a)
                for (int f = 0; f < 4; ++f)
                    for (int g = 0; g < 16; ++g)
                        add(a, StrategyKind::OneWayLeft, f, g,
                            det_box2_oneway(OneWayDir::ThreeToTwo, f, g));
            break;
        case HierarchyClass::ATOBL_RIGHT:
            for (int a = 0; a < 4; ++a)
                for (int f = 0; f < 4; ++f)
                    for (int g = 0; g < 16; ++g)
                        add(a, StrategyKind::OneWayRight, f, g,
                            det_box2_oneway(OneWayDir::TwoToThree, f, g));
            break;
        case HierarchyClass::BL:
            for (int a = 0; a < 4; ++a)
                for (int g2 = 0; g2 < 16; ++g2)
                    for (int g3 = 0; g3 < 16; ++g3)
                        add(a, StrategyKind::TwoWay, g2, g3, det_box2_twoway(g2, g3));
            break;
        default:
            throw UnsupportedClass(std::string("no direct vertex set for ") +
                                   class_name(c));
    }
    return set;
}

}  // namespace

const VertexSet& enumerate_vertices(HierarchyClass c) {
    switch (c) {
        case HierarchyClass::FL: {
            static const VertexSet v = build_vertices(HierarchyClass::FL);
            return v;
        }
        case HierarchyClass::NSBL: {
            static const VertexSet v = build_vertices(HierarchyClass::NSBL);
            return v;
        }
        case HierarchyClass::ATOBL_LEFT: {
            static const VertexSet v = build_vertices(HierarchyClass::ATOBL_LEFT);
            return v;
        }
        case HierarchyClass::ATOBL_RIGHT: {
            static const VertexSet v = build_vertices(HierarchyClass::ATOBL_RIGHT);
            return v;
        }
        case HierarchyClass::BL: {
            static const VertexSet v = build_vertices(HierarchyClass::BL);
            return v;
        }
        default:
            throw UnsupportedClass(std::string("no direct vertex set for ") +
                                   class_name(c));
    }
}

namespace {

void append_columns(lp::FeasibilityProblem& prob, const VertexSet& set) {
    for (const Box3& v : set.vertices) {
        const auto flat = v.flat();
        prob.vertices.insert(prob.vertices.end(), flat.begin(), flat.end());
        ++prob.num_vertices;
    }
}

// Flat 64 x 16384 column blocks of the triple systems, built once. Layout
// matches make_tobl_problems.
struct ToblColumns {
    std::vector<double> right;  // block of a (x) f_right columns
    std::vector<double> left;   // block of a (x) f_left columns
    static constexpr std::size_t kCols = 4 * 64 * 64;
};

const ToblColumns& tobl_columns() {
    static const ToblColumns cols = [] {
        std::vector<Box3> lefts, rights;
        lefts.reserve(4 * 64);
        rights.reserve(4 * 64);
        for (int a = 0; a < 4; ++a)
            for (int f = 0; f < 4; ++f)
                for (int g = 0; g < 16; ++g) {
                    lefts.push_back(tensor_product(
                        det_box1(a), det_box2_oneway(OneWayDir::ThreeToTwo, f, g)));
                    rights.push_back(tensor_product(
                        det_box1(a), det_box2_oneway(OneWayDir::TwoToThree, f, g)));
                }
        ToblColumns c;
        c.right.resize(ToblColumns::kCols * Box3::kSize);
        c.left.resize(ToblColumns::kCols * Box3::kSize);
        std::size_t j = 0;
        for (int a = 0; a < 4; ++a)
            for (int l = 0; l < 64; ++l)
                for (int r = 0; r < 64; ++r, ++j) {
                    const auto rf = rights[a * 64 + r].flat();
                    const auto lf = lefts[a * 64 + l].flat();
                    std::copy(rf.begin(), rf.end(),
                              c.right.begin() + j * Box3::kSize);
                    std::copy(lf.begin(), lf.end(),
                              c.left.begin() + j * Box3::kSize);
                }
        return c;
    }();
    return cols;
}

std::vector<double> box_target(const Box3& b) {
    return std::vector<double>(b.flat().begin(), b.flat().end());
}

}  // namespace

lp::FeasibilityProblem make_membership_problem(const Box3& b, HierarchyClass c,
                                               double tol) {
    lp::FeasibilityProblem prob;
    prob.dim = Box3::kSize;
    prob.tol = tol;
    prob.target = box_target(b);
    if (c == HierarchyClass::ATOBL_HULL) {
        append_columns(prob, enumerate_vertices(HierarchyClass::ATOBL_LEFT));
        append_columns(prob, enumerate_vertices(HierarchyClass::ATOBL_RIGHT));
    } else {
        append_columns(prob, enumerate_vertices(c));
    }
    return prob;
}

std::vector<lp::FeasibilityProblem> make_tobl_problems(const Box3& b, double tol) {
    const ToblColumns& cols = tobl_columns();
    lp::FeasibilityProblem right, left;
    right.dim = left.dim = Box3::kSize;
    right.tol = left.tol = tol;
    right.num_vertices = left.num_vertices = ToblColumns::kCols;
    right.vertices = cols.right;
    left.vertices = cols.left;
    right.target = left.target = box_target(b);
    return {right, left};
}

lp::MembershipResult tobl_membership(const Box3& b, double tol, lp::Backend backend) {
    // A TOBL box is no-signaling: the right system forces the o2 marginal to
    // depend on i2 only, the left system does the same for o3, and the
    // party-1 factor decouples. A marginal discrepancy above tol therefore
    // certifies Out; the discrepancy functional, placed in the block whose
    // columns it annihilates, is a valid separating witness.
    const NsViolationFunctional viol = max_ns_violation(b);
    if (viol.value > tol) {
        const bool right_block =
            !(viol.marginal_subset[2] && viol.flipping_party == 1);
        // The witness is zero on the other block, so the column maximum over
        // the stacked system reduces to the annihilated block alone.
        const auto& block = right_block ? tobl_columns().right : tobl_columns().left;
        double offset = -1e300;
        for (std::size_t j = 0; j < ToblColumns::kCols; ++j) {
            const double* col = block.data() + j * Box3::kSize;
            double v = 0.0;
            for (int k = 0; k < Box3::kSize; ++k) v += viol.coeffs[k] * col[k];
            offset = std::max(offset, v);
        }
        double yt = 0.0;
        for (int k = 0; k < Box3::kSize; ++k) yt += viol.coeffs[k] * b.flat()[k];
        const double margin = yt - offset;
        if (margin > tol / 2.0) {
            std::vector<double> witness(2 * Box3::kSize, 0.0);
            const std::size_t off = right_block ? 0 : Box3::kSize;
            for (int k = 0; k < Box3::kSize; ++k) witness[off + k] = viol.coeffs[k];
            lp::MembershipResult res;
            res.verdict = lp::Verdict::Out;
            res.witness = std::move(witness);
            res.witness_offset = offset;
            res.witness_margin = margin;
            return res;
        }
        // Fall through to the LP if the analytic witness failed to verify.
    }
    return lp::solve_joint_feasibility(make_tobl_problems(b, tol), backend);
}

lp::MembershipResult membership(const Box3& b, HierarchyClass c, double tol,
                                lp::Backend backend) {
    switch (c) {
        case HierarchyClass::NS: {
            lp::MembershipResult res;
            res.verdict = no_signaling_check(b, tol).is_ns ? lp::Verdict::In
                                                           : lp::Verdict::Out;
            return res;
        }
        case HierarchyClass::TOBL:
            return tobl_membership(b, tol, backend);
        case HierarchyClass::ATOBL_UNION: {
            auto left = membership(b, HierarchyClass::ATOBL_LEFT, tol, backend);
            if (left.verdict == lp::Verdict::In) return left;
            auto right = membership(b, HierarchyClass::ATOBL_RIGHT, tol, backend);
            if (right.verdict == lp::Verdict::In) return right;
            // Out of both components. No single functional certifies union
            // non-membership; the per-side witnesses live in their own
            // class results.
            lp::MembershipResult res;
            res.verdict = lp::Verdict::Out;
            return res;
        }
        default:
            return lp::solve_feasibility(make_membership_problem(b, c, tol), backend);
    }
}

void check_hierarchy_consistency(bool in_fl, bool in_nsbl, bool in_tobl,
                                 bool in_left, bool in_right, bool in_union,
                                 bool in_hull, bool in_bl) {
    auto require = [](bool cond, const char* what) {
        if (!cond) throw HierarchyInconsistency(what);
    };
    require(!in_fl || in_nsbl, "FL verdict In but NSBL Out");
    require(!in_nsbl || in_tobl, "NSBL verdict In but TOBL Out");
    require(!in_tobl || (in_left && in_right),
            "TOBL verdict In but an asymmetric class Out");
    require(in_union == (in_left || in_right),
            "union verdict disagrees with its components");
    require(!in_union || in_hull, "union verdict In but hull Out");
    require(!in_hull || in_bl, "hull verdict In but BL Out");
}

const lp::MembershipResult* ClassificationReport::find(HierarchyClass c) const {
    for (const auto& [cls, res] : entries)
        if (cls == c) return &res;
    return nullptr;
}

bool ClassificationReport::is_in(HierarchyClass c) const {
    const auto* r = find(c);
    return r != nullptr && r->verdict == lp::Verdict::In;
}

ClassificationReport classify_full(const Box3& b, double tol, lp::Backend backend) {
    ClassificationReport rep;
    rep.ns_report = no_signaling_check(b, tol);

    const HierarchyClass order[] = {
        HierarchyClass::FL,          HierarchyClass::NSBL,
        HierarchyClass::TOBL,        HierarchyClass::ATOBL_LEFT,
        HierarchyClass::ATOBL_RIGHT, HierarchyClass::ATOBL_UNION,
        HierarchyClass::ATOBL_HULL,  HierarchyClass::BL,
        HierarchyClass::NS};
    for (HierarchyClass c : order)
        rep.entries.emplace_back(c, membership(b, c, tol, backend));

    check_hierarchy_consistency(
        rep.is_in(HierarchyClass::FL), rep.is_in(HierarchyClass::NSBL),
        rep.is_in(HierarchyClass::TOBL), rep.is_in(HierarchyClass::ATOBL_LEFT),
        rep.is_in(HierarchyClass::ATOBL_RIGHT), rep.is_in(HierarchyClass::ATOBL_UNION),
        rep.is_in(HierarchyClass::ATOBL_HULL), rep.is_in(HierarchyClass::BL));

    for (HierarchyClass c : order) {
        if (rep.is_in(c)) {
            rep.finest_class = c;
            break;
        }
    }
    return rep;
}

std::string serialize_report(const ClassificationReport& rep) {
    nlohmann::json j;
    j["classes"] = nlohmann::json::object();
    for (const auto& [cls, res] : rep.entries) {
        nlohmann::json e;
        e["verdict"] = res.verdict == lp::Verdict::In ? "In" : "Out";
        if (res.weights) {
            nlohmann::json w = nlohmann::json::array();
            for (std::size_t k = 0; k < res.weights->size(); ++k) {
                if ((*res.weights)[k] > 1e-15) {
                    w.push_back({{"vertex", k}, {"weight", (*res.weights)[k]}});
                }
            }
            e["weights"] = std::move(w);
        }
        if (res.witness) {
            e["witness"] = *res.witness;
            e["witness_offset"] = res.witness_offset;
            e["witness_margin"] = res.witness_margin;
        }
        j["classes"][class_name(cls)] = std::move(e);
    }
    j["finest_class"] =
        rep.finest_class ? nlohmann::json(class_name(*rep.finest_class))
                         : nlohmann::json(nullptr);
    j["no_signaling"] = {{"is_ns", rep.ns_report.is_ns},
                         {"max_violation", rep.ns_report.max_violation}};
    if (rep.ns_report.violating_party)
        j["no_signaling"]["violating_party"] = *rep.ns_report.violating_party;
    return j.dump(2) + "\n";
}

}  // namespace boxlab
