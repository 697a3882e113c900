#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "boxlab/bell.hpp"
#include "boxlab/box.hpp"
#include "boxlab/classify.hpp"
#include "boxlab/constructors.hpp"
#include "boxlab/scan.hpp"
#include "boxlab/wiring.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitOut = 3;

double default_tol() {
    if (const char* env = std::getenv("BOXLAB_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && v > 0.0) return v;
        throw boxlab::Error("BOXLAB_TOL must be a positive number");
    }
    return boxlab::kDefaultTol;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw boxlab::Error("cannot read " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw boxlab::Error("cannot write " + path);
    out << text;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

int cmd_make(const std::string& kind, double eps, double alpha, int pr_a, int pr_b,
             int pr_g, int f1, int f2, int f3, bool swap23,
             const std::string& out_path) {
    using namespace boxlab;
    std::string text;
    if (kind == "ghz") {
        text = serialize(ghz_box(swap23 ? MeasurementAssignment::ghz_swapped23()
                                        : MeasurementAssignment::ghz_default()));
    } else if (kind == "peps-left") {
        text = serialize(p_eps_left(EpsParams(eps)));
    } else if (kind == "peps-right") {
        text = serialize(p_eps_right(EpsParams(eps)));
    } else if (kind == "peps-alpha") {
        text = serialize(p_eps_alpha(EpsParams(eps), alpha));
    } else if (kind == "pr") {
        text = serialize(pr_box(pr_a, pr_b, pr_g));
    } else if (kind == "noise") {
        text = serialize(noise_box());
    } else if (kind == "det") {
        text = serialize(tensor_product(det_box1(f1), det_box2_local(f2, f3)));
    } else {
        throw Error("unknown box kind " + kind);
    }
    write_file(out_path, text);
    return kExitOk;
}

int cmd_classify(const std::string& in_path, const std::string& cls_name, double tol) {
    using namespace boxlab;
    const Box3 box = deserialize_box3(read_file(in_path));
    if (cls_name.empty()) {
        const ClassificationReport rep = classify_full(box, tol);
        std::cout << serialize_report(rep);
        return kExitOk;
    }
    const auto cls = class_from_name(cls_name);
    if (!cls) throw Error("unknown class " + cls_name);
    const auto res = membership(box, *cls, tol);
    ClassificationReport rep;
    rep.entries.emplace_back(*cls, res);
    rep.ns_report = no_signaling_check(box, tol);
    if (res.verdict == lp::Verdict::In) rep.finest_class = *cls;
    std::cout << serialize_report(rep);
    return res.verdict == lp::Verdict::In ? kExitOk : kExitOut;
}

int cmd_wire(const std::string& in_path, const std::string& protocol,
             const std::string& out_path) {
    using namespace boxlab;
    const Box3 box = deserialize_box3(read_file(in_path));
    Box2 wired = protocol == "2to3" ? wire_2to3(box) : wire_3to2(box);
    write_file(out_path, serialize(wired));
    return kExitOk;
}

int cmd_chsh(const std::string& in_path, const std::string& variant_spec) {
    using namespace boxlab;
    const Box2 box = deserialize_box2(read_file(in_path));
    std::cout << "canonical " << fmt(chsh_value(box, canonical_chsh_variant()))
              << "\n";
    std::cout << "max " << fmt(chsh_max(box)) << "\n";
    if (!variant_spec.empty()) {
        std::array<int, 4> signs{};
        if (std::sscanf(variant_spec.c_str(), "%d,%d,%d,%d", &signs[0], &signs[1],
                        &signs[2], &signs[3]) != 4)
            throw Error("variant must be four comma-separated signs, e.g. 1,1,-1,1");
        std::cout << "variant " << fmt(chsh_value(box, ChshVariant(signs))) << "\n";
    }
    return kExitOk;
}

int cmd_scan(const boxlab::ScanOptions& opt, const std::string& out_path) {
    const auto records = boxlab::run_scan(opt);
    std::ostringstream os;
    boxlab::write_csv(os, records, opt);
    if (out_path.empty() || out_path == "-")
        std::cout << os.str();
    else
        write_file(out_path, os.str());
    return kExitOk;
}

int cmd_witness(const std::string& in_path, const std::string& cls_name, double tol) {
    using namespace boxlab;
    const Box3 box = deserialize_box3(read_file(in_path));
    const auto cls = class_from_name(cls_name);
    if (!cls) throw Error("unknown class " + cls_name);

    auto print_witness = [&](HierarchyClass c, const lp::MembershipResult& res) {
        std::cout << class_name(c) << " Out\n";
        if (!res.witness) {
            std::cout << "  (no single witness for this class)\n";
            return;
        }
        std::cout << "  offset " << fmt(res.witness_offset) << "  margin "
                  << fmt(res.witness_margin) << "\n  y =";
        for (double v : *res.witness) std::cout << ' ' << fmt(v);
        std::cout << "\n";
    };

    if (*cls == HierarchyClass::ATOBL_UNION) {
        // Union non-membership is certified side by side.
        const auto left = membership(box, HierarchyClass::ATOBL_LEFT, tol);
        const auto right = membership(box, HierarchyClass::ATOBL_RIGHT, tol);
        if (left.verdict == lp::Verdict::In || right.verdict == lp::Verdict::In) {
            std::cout << "In " << class_name(*cls) << " -- no witness\n";
            return kExitOk;
        }
        print_witness(HierarchyClass::ATOBL_LEFT, left);
        print_witness(HierarchyClass::ATOBL_RIGHT, right);
        return kExitOut;
    }

    const auto res = membership(box, *cls, tol);
    if (res.verdict == lp::Verdict::In) {
        std::cout << "In " << class_name(*cls) << " -- no witness\n";
        return kExitOk;
    }
    print_witness(*cls, res);
    return kExitOut;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boxlab: tripartite no-signaling boxes, wirings, CHSH values, "
                 "and LP-certified bilocality-class membership"};
    app.require_subcommand(1);

    double tol;
    try {
        tol = default_tol();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    // make
    auto* mk = app.add_subcommand("make", "construct a box and write it to a file");
    std::string mk_kind, mk_out;
    double mk_eps = 0.5, mk_alpha = 0.5;
    int mk_a = 0, mk_b = 0, mk_g = 0, mk_f1 = 0, mk_f2 = 0, mk_f3 = 0;
    bool mk_swap = false;
    mk->add_option("kind", mk_kind, "ghz|peps-left|peps-right|peps-alpha|pr|noise|det")
        ->required()
        ->check(CLI::IsMember(
            {"ghz", "peps-left", "peps-right", "peps-alpha", "pr", "noise", "det"}));
    mk->add_option("-o,--out", mk_out, "output box file")->required();
    mk->add_option("--eps", mk_eps, "bias parameter in [0,1]");
    mk->add_option("--alpha", mk_alpha, "mixing weight of the left box");
    mk->add_option("--a", mk_a, "PR variant bit a");
    mk->add_option("--b", mk_b, "PR variant bit b");
    mk->add_option("--g", mk_g, "PR variant bit g");
    mk->add_option("--f1", mk_f1, "party-1 response code (det)");
    mk->add_option("--f2", mk_f2, "party-2 response code (det)");
    mk->add_option("--f3", mk_f3, "party-3 response code (det)");
    mk->add_flag("--swap23", mk_swap, "ghz: swap the measurement sets of parties 2,3");

    // classify
    auto* cl = app.add_subcommand("classify", "classification report for a box file");
    std::string cl_in, cl_class;
    double cl_tol = tol;
    cl->add_option("input", cl_in, "tripartite box file")->required();
    cl->add_option("--class", cl_class, "query one class only");
    cl->add_option("--tol", cl_tol, "membership tolerance");

    // wire
    auto* wr = app.add_subcommand("wire", "collapse a tripartite box across 1|23");
    std::string wr_in, wr_proto, wr_out;
    wr->add_option("input", wr_in, "tripartite box file")->required();
    wr->add_option("--protocol", wr_proto, "2to3 (i3=o2) or 3to2 (i2=o3)")
        ->required()
        ->check(CLI::IsMember({"2to3", "3to2"}));
    wr->add_option("-o,--out", wr_out, "output bipartite box file")->required();

    // chsh
    auto* ch = app.add_subcommand("chsh", "CHSH values of a bipartite box");
    std::string ch_in, ch_variant;
    ch->add_option("input", ch_in, "bipartite box file")->required();
    ch->add_option("--variant", ch_variant, "four comma-separated signs");

    // scan
    auto* sc = app.add_subcommand("scan", "(eps, alpha) grid scan to CSV");
    boxlab::ScanOptions opt;
    opt.tol = tol;
    std::string sc_out;
    sc->add_option("--eps-min", opt.eps_min, "grid start (default 0)");
    sc->add_option("--eps-max", opt.eps_max, "grid end (default 1)");
    sc->add_option("--eps-step", opt.eps_step, "grid step (default 0.1)");
    sc->add_option("--alpha-min", opt.alpha_min, "grid start (default 0)");
    sc->add_option("--alpha-max", opt.alpha_max, "grid end (default 1)");
    sc->add_option("--alpha-step", opt.alpha_step, "grid step (default 0.25)");
    sc->add_flag("--lp", opt.lp, "add per-class LP verdict columns");
    sc->add_flag("--lp-tobl", opt.lp_tobl, "add the joint TOBL column (slow)");
    sc->add_option("--tol", opt.tol, "membership tolerance");
    sc->add_option("-o,--out", sc_out, "output CSV file ('-' for stdout)");

    // witness
    auto* wt = app.add_subcommand("witness",
                                  "print the separating functional of an Out verdict");
    std::string wt_in, wt_class;
    double wt_tol = tol;
    wt->add_option("input", wt_in, "tripartite box file")->required();
    wt->add_option("--class", wt_class, "hierarchy class")->required();
    wt->add_option("--tol", wt_tol, "membership tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (mk->parsed())
            return cmd_make(mk_kind, mk_eps, mk_alpha, mk_a, mk_b, mk_g, mk_f1, mk_f2,
                            mk_f3, mk_swap, mk_out);
        if (cl->parsed()) return cmd_classify(cl_in, cl_class, cl_tol);
        if (wr->parsed()) return cmd_wire(wr_in, wr_proto, wr_out);
        if (ch->parsed()) return cmd_chsh(ch_in, ch_variant);
        if (sc->parsed()) {
            opt.lp = opt.lp || opt.lp_tobl;
            return cmd_scan(opt, sc_out);
        }
        if (wt->parsed()) return cmd_witness(wt_in, wt_class, wt_tol);
    } catch (const boxlab::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
