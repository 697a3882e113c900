#pragma once

#include <array>

#include "boxlab/box.hpp"

namespace boxlab {

/// One member of the CHSH family: a sign per correlator E(0,0), E(0,1),
/// E(1,0), E(1,1), with an odd number of minus signs. Local bound 2,
/// no-signaling bound 4.
struct ChshVariant {
    std::array<int, 4> signs;  // indexed by 2x + y

    explicit ChshVariant(const std::array<int, 4>& s);
};

/// All 8 admissible sign patterns, in a fixed deterministic order.
const std::array<ChshVariant, 8>& chsh_variants();

/// The variant whose value on the wired one-way family matches the closed
/// forms alpha + eps(3-2alpha) and (1-alpha) + eps(1+2alpha); calibrated
/// once against those formulas and frozen. Signs (+, +, -, +).
const ChshVariant& canonical_chsh_variant();

/// E(x,y) = sum_{o,o'} (-1)^(o xor o') q(o o' | x y).
double correlator(const Box2& b, int x, int y);

double chsh_value(const Box2& b, const ChshVariant& v);

/// Maximum of chsh_value over the 8 variants (always >= 0: variants come in
/// sign-flipped pairs).
double chsh_max(const Box2& b);

}  // namespace boxlab
