#include "boxlab/wiring.hpp"

namespace boxlab {

Box2 wire_2to3(const Box3& b) {
    std::array<double, Box2::kSize> flat{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int j = 0; j < 2; ++j)
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o3 = 0; o3 < 2; ++o3) {
                    double q = 0.0;
                    for (int o2 = 0; o2 < 2; ++o2) q += b.prob(o1, o2, o3, i1, j, o2);
                    flat[(2 * i1 + j) * 4 + (2 * o1 + o3)] = q;
                }
    return Box2(flat);
}

Box2 wire_3to2(const Box3& b) {
    std::array<double, Box2::kSize> flat{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int j = 0; j < 2; ++j)
            for (int o1 = 0; o1 < 2; ++o1)
                for (int o2 = 0; o2 < 2; ++o2) {
                    double q = 0.0;
                    for (int o3 = 0; o3 < 2; ++o3) q += b.prob(o1, o2, o3, i1, o3, j);
                    flat[(2 * i1 + j) * 4 + (2 * o1 + o2)] = q;
                }
    return Box2(flat);
}

namespace {
int apply_map(int code, int x) { return (code >> x) & 1; }
}

Box2 wire_general(const Box3& b, const WiringSpec& w) {
    if (w.first_mover != 2 && w.first_mover != 3)
        throw Error("first_mover must be party 2 or 3");
    if ((w.input_map & ~3) || (w.relay_map & ~3))
        throw Error("wiring maps must be 2-bit codes");
    std::array<double, Box2::kSize> flat{};
    for (int i1 = 0; i1 < 2; ++i1)
        for (int j = 0; j < 2; ++j)
            for (int o1 = 0; o1 < 2; ++o1)
                for (int of = 0; of < 2; ++of)      // first mover's output
                    for (int os = 0; os < 2; ++os)  // second mover's output
                    {
                        const int i_first = apply_map(w.input_map, j);
                        const int i_second = apply_map(w.relay_map, of);
                        double p;
                        if (w.first_mover == 2)
                            p = b.prob(o1, of, os, i1, i_first, i_second);
                        else
                            p = b.prob(o1, os, of, i1, i_second, i_first);
                        const int out =
                            w.output_select == WiringSpec::Output::FirstMover ? of : os;
                        flat[(2 * i1 + j) * 4 + (2 * o1 + out)] += p;
                    }
    return Box2(flat);
}

}  // namespace boxlab
