#pragma once

#include <optional>
#include <string>
#include <vector>

#include "boxlab/box.hpp"
#include "boxlab/constructors.hpp"
#include "boxlab/lp.hpp"

namespace boxlab {

inline constexpr double kDefaultTol = 1e-9;

/// Classes ordered by inclusion: FL in NSBL in TOBL in ATOBL_LEFT and
/// ATOBL_RIGHT, each in their union, in their convex hull, in BL. NS is
/// reported alongside (membership there is constraint-checked, and BL
/// vertex mixtures may signal between parties 2 and 3).
enum class HierarchyClass {
    FL,
    NSBL,
    TOBL,
    ATOBL_LEFT,   // decompositions with signaling from 3 to 2 only
    ATOBL_RIGHT,  // decompositions with signaling from 2 to 3 only
    ATOBL_UNION,
    ATOBL_HULL,
    BL,
    NS,
};

const char* class_name(HierarchyClass c);
std::optional<HierarchyClass> class_from_name(const std::string& name);

enum class StrategyKind { LocalDet, OneWayLeft, OneWayRight, TwoWay, PR };

/// Strategy metadata for one vertex: the party-1 response code plus the
/// bipartite strategy codes (meaning depends on kind; see constructors).
struct VertexDescriptor {
    int party1;
    StrategyKind kind;
    int code_a;
    int code_b;
};

struct VertexSet {
    HierarchyClass cls;
    std::vector<Box3> vertices;
    std::vector<VertexDescriptor> descriptors;
};

/// Extremal boxes of one class: FL 64, NSBL 96 (16 local det + 8 PR
/// variants per party-1 strategy), ATOBL_LEFT/RIGHT 256 each, BL 1024.
/// Classes without a direct vertex set (NS, TOBL, ATOBL_UNION, ATOBL_HULL)
/// raise UnsupportedClass.
const VertexSet& enumerate_vertices(HierarchyClass c);

/// The 24 extremal points of the bipartite 2-input/2-output no-signaling
/// polytope: 16 local deterministic boxes followed by the 8 PR variants.
const std::vector<Box2>& ns_bipartite_extremals();

/// LP membership problem for a vertex class (ATOBL_HULL uses the 512-column
/// union of the two one-way sets).
lp::FeasibilityProblem make_membership_problem(const Box3& b, HierarchyClass c,
                                               double tol = kDefaultTol);

/// The shared-weight pair of systems deciding TOBL: columns are the 16384
/// triples (party-1 det a, one-way-left det, one-way-right det), indexed
/// j = (a*64 + left)*64 + right with one-way index 16*f + g. Problem 0
/// carries the right-decomposition system, problem 1 the left one; both
/// targets equal the box.
std::vector<lp::FeasibilityProblem> make_tobl_problems(const Box3& b,
                                                       double tol = kDefaultTol);

lp::MembershipResult membership(const Box3& b, HierarchyClass c,
                                double tol = kDefaultTol,
                                lp::Backend backend = lp::Backend::OpenMP);

/// Joint feasibility over the shared triple weights. A box whose marginals
/// already signal (beyond tol) is certified Out directly from the marginal
/// discrepancy functional; otherwise the stacked LP runs.
lp::MembershipResult tobl_membership(const Box3& b, double tol = kDefaultTol,
                                     lp::Backend backend = lp::Backend::OpenMP);

struct ClassificationReport {
    std::vector<std::pair<HierarchyClass, lp::MembershipResult>> entries;
    std::optional<HierarchyClass> finest_class;
    NsReport ns_report;

    const lp::MembershipResult* find(HierarchyClass c) const;
    bool is_in(HierarchyClass c) const;
};

/// Runs every class test, enforces inclusion-consistent verdicts (raising
/// HierarchyInconsistency otherwise), and reports the finest containing
/// class.
ClassificationReport classify_full(const Box3& b, double tol = kDefaultTol,
                                   lp::Backend backend = lp::Backend::OpenMP);

/// Raises HierarchyInconsistency unless the In/Out flags respect the class
/// inclusions (FL => NSBL => TOBL => LEFT & RIGHT; UNION = LEFT | RIGHT;
/// UNION => HULL => BL). The NS verdict is reported independently.
void check_hierarchy_consistency(bool in_fl, bool in_nsbl, bool in_tobl,
                                 bool in_left, bool in_right, bool in_union,
                                 bool in_hull, bool in_bl);

/// Structured-text rendering of a report (JSON; weights listed sparsely).
std::string serialize_report(const ClassificationReport& rep);

}  // namespace boxlab
