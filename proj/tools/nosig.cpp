// Command-line front end. Every number printed here comes from a library
// call; this file only parses arguments and formats output.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nosig/correlations.hpp"
#include "nosig/keyrate.hpp"
#include "nosig/protocol.hpp"
#include "nosig/quantum.hpp"

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Options {
    bool csv = false;
    int steps = 0;  // 0 = command default
    double tol = 1e-5;
    std::uint64_t seed = 20060915;
};

// simple aligned-or-csv row printer
class Rows {
public:
    explicit Rows(bool csv) : csv_(csv) {}
    void header(std::vector<std::string> h) { rows_.push_back(std::move(h)); }
    void row(std::vector<std::string> r) { rows_.push_back(std::move(r)); }
    void flush(std::ostream& os) const {
        if (csv_) {
            for (const auto& r : rows_) {
                for (std::size_t i = 0; i < r.size(); ++i)
                    os << (i ? "," : "") << r[i];
                os << "\n";
            }
            return;
        }
        std::vector<std::size_t> w;
        for (const auto& r : rows_)
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (w.size() <= i) w.resize(i + 1, 0);
                w[i] = std::max(w[i], r[i].size());
            }
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << r[i] << std::string(w[i] - r[i].size(), ' ');
                if (i + 1 < r.size()) os << "  ";
            }
            os << "\n";
        }
    }

private:
    bool csv_;
    std::vector<std::vector<std::string>> rows_;
};

nosig::CorrelationTable load_table(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    return nosig::read_table(f);
}

int cmd_rates(const Options& opt) {
    int steps = opt.steps ? opt.steps : 31;
    Rows out(opt.csv);
    out.header({"D", "r_ck_nosig_q0", "r_ck_nosig_opt", "r_dw_quantum_opt"});
    for (int i = 0; i < steps; ++i) {
        double D = 0.15 * i / (steps - 1);
        double p_nl = std::clamp(nosig::p_nl_from_disturbance(D), 0.0, 1.0);
        double r0 = nosig::ck_isotropic(p_nl, 0.0).rate;
        double ro = nosig::ck_isotropic_opt(p_nl).rate;
        double rq = nosig::optimized_rate(
            [&](double q) { return nosig::dw_rate_chsh(D, q); });
        out.row({fmt(D), fmt(r0), fmt(ro), fmt(rq)});
    }
    out.flush(std::cout);
    return 0;
}

int cmd_slice_map(const Options& opt) {
    int steps = opt.steps ? opt.steps : 40;
    Rows out(opt.csv);
    out.header({"p0", "p1", "p_nl", "ck_q0", "ck_opt_positive", "ad_positive",
                "intrinsic_zero"});
    for (int i = 0; i <= steps; ++i) {
        double p0 = 0.5 + 0.5 * i / steps;
        double p1max = std::min(1.0 - p0, p0 - 0.5);
        for (int j = 0; j <= steps; ++j) {
            double p1 = p1max * j / steps;
            nosig::SlicePoint sp{3, {p0, p1, 1.0 - p0 - p1}};
            double p_nl = sp.p_nl();
            auto r0 = nosig::ck_d3(p0, p1, 0.0);
            auto ro = nosig::ck_d3_opt(p0, p1);
            auto iz = nosig::intrinsic_zero_region_d3(p0, p1);
            out.row({fmt(p0), fmt(p1), fmt(p_nl), fmt(r0.rate),
                     ro.rate > 0 ? "1" : "0", nosig::ad_d3(p0, p1) ? "1" : "0",
                     iz.in_zero_region ? "1" : "0"});
            if (p1max == 0.0) break;
        }
    }
    out.flush(std::cout);
    return 0;
}

int cmd_enumerate(const Options& opt, int d) {
    auto list = nosig::enumerate_saturating(d);
    Rows out(opt.csv);
    out.header({"a0", "a1", "b0", "b1", "class", "relations"});
    for (const auto& e : list)
        out.row({std::to_string(e.strategy.a0), std::to_string(e.strategy.a1),
                 std::to_string(e.strategy.b0), std::to_string(e.strategy.b1),
                 nosig::to_string(e.cls), std::to_string(e.relations)});
    out.flush(std::cout);
    return 0;
}

int cmd_thresholds(const Options& opt) {
    Rows out(opt.csv);
    out.header({"quantity", "value", "tolerance"});
    double tol = opt.tol;
    out.row({"ck_q0_p_nl", fmt(nosig::ck_isotropic_threshold(false, tol)), fmt(tol)});
    double ck_opt = nosig::ck_isotropic_threshold(true, tol);
    out.row({"ck_opt_p_nl", fmt(ck_opt), fmt(tol)});
    out.row({"ck_opt_disturbance", fmt(nosig::disturbance_from_p_nl(ck_opt)), fmt(tol)});
    out.row({"ad_p_nl", fmt(nosig::ad_isotropic_threshold()), fmt(1e-9)});
    out.row({"ad_preprocessed_p_nl", fmt(nosig::ad_preprocessing_threshold(tol)), fmt(tol)});
    out.row({"bb84_q0_disturbance",
             fmt(nosig::critical_disturbance(
                 [](double D, double q) { return nosig::bb84_rate(D, q); }, false, tol)),
             fmt(tol)});
    out.row({"chsh_q0_disturbance",
             fmt(nosig::critical_disturbance(
                 [](double D, double q) { return nosig::dw_rate_chsh(D, q); }, false, tol)),
             fmt(tol)});
    out.row({"chsh_opt_disturbance",
             fmt(nosig::critical_disturbance(
                 [](double D, double q) { return nosig::dw_rate_chsh(D, q); }, true, tol)),
             fmt(tol)});
    out.row({"bb84_opt_disturbance",
             fmt(nosig::critical_disturbance(
                 [](double D, double q) { return nosig::bb84_rate(D, q); }, true, tol)),
             fmt(tol)});
    out.row({"bb84_crossover_disturbance", fmt(nosig::crossover_disturbance()), fmt(1e-5)});
    out.flush(std::cout);
    return 0;
}

int cmd_depolarize(const Options& opt, const std::string& file) {
    auto t = load_table(file);
    auto sp = nosig::depolarize(t);
    Rows out(opt.csv);
    out.header({"f", "p_f"});
    for (int f = 0; f < sp.d; ++f) out.row({std::to_string(f), fmt(sp.pf[f])});
    out.row({"p_nl", fmt(sp.p_nl())});
    out.flush(std::cout);
    return 0;
}

int cmd_qudit(const Options& opt, int d, double gamma,
              const std::vector<double>& coeffs) {
    nosig::SchmidtState st =
        coeffs.empty()
            ? (d == 3 ? nosig::SchmidtState::gamma_state(gamma)
                      : nosig::SchmidtState::maximally_entangled(d))
            : nosig::SchmidtState(d, coeffs);
    auto sp = nosig::qudit_slice(st);
    auto rate = nosig::generic_d_oneway(sp);
    Rows out(opt.csv);
    out.header({"quantity", "value"});
    for (int f = 0; f < sp.d; ++f) out.row({"p_" + std::to_string(f), fmt(sp.pf[f])});
    out.row({"p_nl", fmt(sp.p_nl())});
    out.row({"oneway_rate_dits", fmt(rate.rate)});
    out.row({"oneway_rate_bits", fmt(rate.bits)});
    out.row({"eta", fmt(st.eta())});
    out.flush(std::cout);
    return 0;
}

int cmd_intrinsic(const Options& opt, const std::string& file) {
    auto t = load_table(file);
    nosig::EveDecomposition dec =
        t.d() == 2 ? nosig::decompose(t) : nosig::decompose(nosig::depolarize(t));
    auto joint = nosig::to_joint(nosig::build_tripartite(dec));
    auto res = nosig::intrinsic_info_numeric(joint, 50, opt.seed);
    Rows out(opt.csv);
    out.header({"quantity", "value"});
    out.row({"i_ab_given_e", fmt(nosig::channel_cmi(
                                joint, nosig::partial_to_none_channel(joint.symbols, 0.0)))});
    out.row({"intrinsic_upper_bound", fmt(res.value)});
    out.row({"converged", res.converged ? "1" : "0"});
    out.flush(std::cout);
    return 0;
}

int cmd_ad(const Options& opt, double p_nl, double p0, double p1, int blocks) {
    Rows out(opt.csv);
    out.header({"quantity", "value"});
    if (p0 >= 0.0) {
        out.row({"condition_5p0_gt_4p1p3", nosig::ad_d3(p0, p1) ? "1" : "0"});
    } else {
        out.row({"condition", nosig::ad_isotropic(p_nl) ? "1" : "0"});
        out.row({"threshold_p_nl", fmt(nosig::ad_isotropic_threshold())});
        auto pre = nosig::ad_preprocessing_opt(p_nl);
        out.row({"preprocessed_margin", fmt(pre.margin)});
        out.row({"qA", fmt(pre.qA)});
        out.row({"qB", fmt(pre.qB)});
        if (blocks > 0) {
            auto be = nosig::ad_block_errors(p_nl, blocks);
            out.row({"block_e_ab", fmt(be.e_ab_block)});
            out.row({"block_e_e", fmt(be.e_e_block)});
        }
    }
    out.flush(std::cout);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"secrecy extraction from no-signalling correlations"};
    app.require_subcommand(1);
    Options opt;
    app.add_flag("--csv", opt.csv, "CSV output");
    app.add_option("--steps", opt.steps, "sweep/grid resolution");
    app.add_option("--tol", opt.tol, "bisection tolerance");
    app.add_option("--seed", opt.seed, "RNG seed for stochastic searches");

    auto* rates = app.add_subcommand("rates", "key-rate curves over the disturbance D");
    auto* slice_map = app.add_subcommand("slice-map", "d=3 slice region map");
    auto* enumerate = app.add_subcommand("enumerate", "facet-saturating strategies");
    int enum_d = 2;
    enumerate->add_option("d", enum_d, "output cardinality")->required();
    auto* thresholds = app.add_subcommand("thresholds", "all named thresholds");
    auto* depolarize = app.add_subcommand("depolarize", "project a table onto the slice");
    std::string depol_file;
    depolarize->add_option("file", depol_file, "distribution file")->required();
    auto* qudit = app.add_subcommand("qudit", "quantum slice point from a Schmidt state");
    int qudit_d = 3;
    double gamma = 1.0;
    std::vector<double> coeffs;
    qudit->add_option("--d", qudit_d, "dimension");
    qudit->add_option("--gamma", gamma, "d=3 state parameter");
    qudit->add_option("--coeffs", coeffs, "explicit Schmidt coefficients");
    auto* intrinsic = app.add_subcommand("intrinsic", "intrinsic-information minimization");
    std::string intr_file;
    intrinsic->add_option("file", intr_file, "distribution file")->required();
    auto* ad = app.add_subcommand("ad", "advantage-distillation conditions");
    double ad_pnl = 0.25, ad_p0 = -1.0, ad_p1 = 0.0;
    int ad_blocks = 0;
    ad->add_option("--p-nl", ad_pnl, "isotropic nonlocal weight");
    ad->add_option("--p0", ad_p0, "d=3 slice p0");
    ad->add_option("--p1", ad_p1, "d=3 slice p1");
    ad->add_option("--blocks", ad_blocks, "finite-block diagnostic N");

    // shared flags may appear after the subcommand name
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (rates->parsed()) return cmd_rates(opt);
        if (slice_map->parsed()) return cmd_slice_map(opt);
        if (enumerate->parsed()) return cmd_enumerate(opt, enum_d);
        if (thresholds->parsed()) return cmd_thresholds(opt);
        if (depolarize->parsed()) return cmd_depolarize(opt, depol_file);
        if (qudit->parsed()) return cmd_qudit(opt, qudit_d, gamma, coeffs);
        if (intrinsic->parsed()) return cmd_intrinsic(opt, intr_file);
        if (ad->parsed()) return cmd_ad(opt, ad_pnl, ad_p0, ad_p1, ad_blocks);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
