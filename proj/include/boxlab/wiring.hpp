#pragma once

#include <array>

#include "boxlab/box.hpp"

namespace boxlab {

/// A wiring collapses a tripartite box to a bipartite one across the 1|23
/// partition: inside the joint {2,3} lab one party measures first and its
/// output is relayed as the other party's input.
///
/// `input_map` feeds the lab's single input bit to the first mover;
/// `relay_map` turns the first mover's output into the second mover's
/// input. Maps are functions on {0,1} encoded as 2-bit codes
/// (f(x) = (code >> x) & 1). The lab reports the output of the mover
/// selected by `output_select`; the other output is marginalized.
struct WiringSpec {
    int first_mover = 2;  // 2 or 3
    int input_map = 2;    // identity
    int relay_map = 2;    // identity
    enum class Output { FirstMover, SecondMover } output_select = Output::SecondMover;

    static constexpr int kIdentityMap = 2;  // f(0)=0, f(1)=1
    static constexpr int kNegationMap = 1;  // f(0)=1, f(1)=0
};

/// Party 2 measures first, i3 = o2; the lab reports o3:
/// q(o1 o3 | i1 j) = sum_{o2} p(o1 o2 o3 | i1, i2=j, i3=o2).
Box2 wire_2to3(const Box3& b);

/// Party 3 measures first, i2 = o3; the lab reports o2:
/// q(o1 o2 | i1 j) = sum_{o3} p(o1 o2 o3 | i1, i2=o3, i3=j).
Box2 wire_3to2(const Box3& b);

/// Deterministic wiring with configurable maps. Throws NotNormalized if the
/// input box signals against the wiring order (the collapsed table is then
/// not a distribution); every no-signaling box is safe.
Box2 wire_general(const Box3& b, const WiringSpec& w);

}  // namespace boxlab
