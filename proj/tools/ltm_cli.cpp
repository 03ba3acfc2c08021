// Command-line frontend: reproducible runs of the threshold solvers, the
// partition builder/validator, the segment tracer, the lemma verifiers and
// the figure renderers, with JSON/CSV/SVG outputs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ltm/lyapunov.hpp"
#include "ltm/partition.hpp"
#include "ltm/svg.hpp"
#include "ltm/thresholds.hpp"
#include "ltm/tracer.hpp"
#include "ltm/verify.hpp"

using namespace ltm;

namespace {

void write_or_print(const json& j, const std::string& out) {
    std::string text = j.dump(2);
    text += "\n";
    if (out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw domain_error("cannot open output file " + out);
        os << text;
    }
}

json thresholds_json() {
    json t;
    for (const auto& r : solve_all_thresholds())
        t[threshold_name(r.id)] = json{{"value", r.value}, {"residual", r.residual}};
    return t;
}

int cmd_thresholds(const std::string& out) {
    json t = thresholds_json();
    bool ok = true;
    for (auto& [name, v] : t.items()) {
        std::printf("%-7s = %.12f  (residual %.3e)\n", name.c_str(), v["value"].get<double>(),
                    v["residual"].get<double>());
        ok = ok && v["residual"].get<double>() < 1e-12;
    }
    if (!out.empty()) write_or_print(json{{"id", "thresholds"}, {"thresholds", t}}, out);
    return ok ? 0 : 1;
}

int cmd_partition(double alpha, int k_max, std::size_t samples, std::uint64_t seed,
                  const std::string& out) {
    Params par = make_params(alpha);
    Partition part = build_partition(MapId::F, k_max, par);
    ValidationReport rep = validate_partition(part, samples, par, seed);
    std::printf("cells=%zu tail_area=%.6e (%.3e of S)\n", part.cells.size(), part.tail_area,
                part.tail_area * alpha * alpha);
    std::printf("validated %zu samples: agree=%zu/%zu boundary=%zu tail=%zu disagreements=%zu\n",
                rep.samples, rep.agreements, rep.checked, rep.boundary_flags, rep.tail_flags,
                rep.disagreements.size());
    std::string path = out.empty() ? "partition.csv" : out;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw domain_error("cannot open output file " + path);
    export_partition_csv(part, os);
    std::printf("wrote %s\n", path.c_str());
    return rep.disagreements.empty() ? 0 : 1;
}

int cmd_trace(double alpha, double x0, double y0, double x1, double y1, int budget) {
    Params par = make_params(alpha);
    Partition part = build_partition(MapId::F, 15, par);
    Segment seg({x0, y0}, {x1, y1});
    TraceResult r = trace_segment(seg, budget, par, part);
    const char* names[] = {"C1", "C2", "C3", "Budget"};
    std::printf("outcome=%s steps=%d h_power=%d growth_sum=%.6f\n",
                names[static_cast<int>(r.outcome)], r.steps_used, r.h_power, r.growth_sum0);
    if (r.outcome == TraceOutcome::C1) std::printf("delta=%.6e\n", r.delta);
    if (r.outcome == TraceOutcome::C2)
        std::printf("bridges scrL_%d%s pair\n", r.k_bridge, r.bridge_starred ? "*" : "");
    for (const auto& st : r.steps) {
        std::printf("  %s_S via %-6s pieces=%d tail=%d best_ratio=%.4f H^: %d image=(%.6f,%.6f)-(%.6f,%.6f)\n",
                    st.side == Side::F ? "F" : "G", st.chosen.str().c_str(), st.pieces,
                    st.tail_pieces, st.best_ratio, st.h_power_after, st.image.p0.x, st.image.p0.y,
                    st.image.p1.x, st.image.p1.y);
    }
    if (r.produced)
        std::printf("v-segment: (%.9f,%.9f)-(%.9f,%.9f)\n", r.produced->p0.x, r.produced->p0.y,
                    r.produced->p1.x, r.produced->p1.y);
    return r.outcome == TraceOutcome::Budget ? 1 : 0;
}

int cmd_verify(const std::string& lemma, double alpha, std::size_t samples, std::uint64_t seed,
               int budget, int k, const std::string& out) {
    Params par = make_params(alpha);
    json j;
    bool ok = false;
    if (lemma == "1") {
        VerifyReport a = verify_lemma1(k, samples, par, seed, false);
        VerifyReport b = verify_lemma1(k, samples, par, seed, true);
        ok = a.ok() && b.ok();
        j = json{{"id", "lemma1"}, {"alpha", alpha}, {"direct", a.to_json()},
                 {"transported", b.to_json()}};
    } else if (lemma == "3") {
        Partition part = build_partition(MapId::F, 15, par);
        VerifyReport r = verify_lemma3(samples, par, part, seed, budget);
        ok = r.ok();
        j = r.to_json();
    } else if (lemma == "growth") {
        Partition part = build_partition(MapId::F, 15, par);
        VerifyReport r = verify_growth(samples, par, part, seed, budget);
        ok = r.ok();
        j = r.to_json();
    } else if (lemma == "pipeline") {
        VerifyReport r = verify_pipeline(par);
        ok = r.ok();
        j = r.to_json();
    } else {
        throw domain_error("unknown lemma id: " + lemma);
    }
    write_or_print(j, out);
    return ok ? 0 : 1;
}

int cmd_figure(const std::string& id, double alpha, const std::string& out, std::uint64_t seed) {
    FigureSpec spec;
    if (id == "fig2") spec.id = FigureId::fig2;
    else if (id == "fig3a") spec.id = FigureId::fig3a;
    else if (id == "fig3b") spec.id = FigureId::fig3b;
    else if (id == "fig4") spec.id = FigureId::fig4;
    else throw domain_error("unknown figure id: " + id);
    spec.alpha = alpha;
    spec.out_path = out;
    spec.seed = seed;
    render_figure(spec);
    std::printf("wrote %s\n", out.c_str());
    return 0;
}

int cmd_lyapunov(double alpha, int iters, std::uint64_t seed, int restarts) {
    Params par = make_params(alpha);
    LyapunovEstimate est = lyapunov(MapId::H, {0.1, 0.1}, iters, par, seed, restarts);
    std::printf("lambda=%.9f ci_halfwidth=%.3e n_iter=%d restarts=%d seed=%llu\n", est.lambda,
                est.ci_halfwidth, est.n_iter, restarts,
                static_cast<unsigned long long>(seed));
    for (double l : est.per_restart) std::printf("  restart lambda=%.9f\n", l);
    return est.lambda > 0.0 ? 0 : 1;
}

int cmd_report(double alpha, std::size_t samples, std::uint64_t seed, int k_max, int budget,
               const std::string& out) {
    Params par = make_params(alpha);
    json j;
    j["id"] = "report";
    j["alpha"] = alpha;
    j["seed"] = seed;
    j["tool"] = std::string("ltm ") + kVersion;
    j["thresholds"] = thresholds_json();

    Partition part = build_partition(MapId::F, k_max, par);
    ValidationReport vr = validate_partition(part, samples, par, seed);
    j["partition"] = json{{"k_max", k_max},
                          {"cells", part.cells.size()},
                          {"tail_area", part.tail_area},
                          {"samples", vr.samples},
                          {"checked", vr.checked},
                          {"agreements", vr.agreements},
                          {"boundary_flags", vr.boundary_flags},
                          {"tail_flags", vr.tail_flags},
                          {"disagreements", vr.disagreements.size()}};
    bool ok = vr.disagreements.empty();

    PeriodicData pd = periodic_point(par);
    j["periodic_point"] = json{{"x", pd.z_p.x},
                               {"y", pd.z_p.y},
                               {"trace", pd.DH4.trace()},
                               {"det", pd.DH4.det()},
                               {"top_right_composed", pd.composed_top_right},
                               {"top_right_printed", pd.printed_top_right},
                               {"g_plus", pd.g_plus},
                               {"g_minus", pd.g_minus}};

    json vers = json::array();
    for (int k : {4, 5, 6}) {
        VerifyReport r = verify_lemma1(k, samples, par, seed, false);
        ok = ok && r.ok();
        vers.push_back(r.to_json());
    }
    VerifyReport l3 = verify_lemma3(std::min<std::size_t>(samples, 200), par, part, seed, budget);
    ok = ok && l3.ok();
    vers.push_back(l3.to_json());
    VerifyReport gr = verify_growth(samples, par, part, seed, budget);
    ok = ok && gr.ok();
    vers.push_back(gr.to_json());
    VerifyReport pl = verify_pipeline(par);
    ok = ok && pl.ok();
    vers.push_back(pl.to_json());
    j["verifications"] = vers;
    write_or_print(j, out);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"counter-twisting linked twist map toolkit"};
    app.require_subcommand(1);

    double alpha = 2.5;
    std::uint64_t seed = 42;
    int k_max = 15;
    int budget = 200;
    std::size_t samples = 1000;
    std::string out;

    auto* c_thr = app.add_subcommand("thresholds", "solve the parameter thresholds");
    c_thr->add_option("--out", out, "write JSON here as well");

    auto* c_part = app.add_subcommand("partition", "build and validate the return-time partition");
    c_part->add_option("--alpha", alpha);
    c_part->add_option("--k-max", k_max);
    c_part->add_option("--samples", samples);
    c_part->add_option("--seed", seed);
    c_part->add_option("--out", out, "CSV path (default partition.csv)");

    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
    auto* c_trace = app.add_subcommand("trace", "trace one cone-aligned segment");
    c_trace->add_option("--alpha", alpha);
    c_trace->add_option("--x0", x0)->required();
    c_trace->add_option("--y0", y0)->required();
    c_trace->add_option("--x1", x1)->required();
    c_trace->add_option("--y1", y1)->required();
    c_trace->add_option("--budget", budget);

    std::string lemma = "growth";
    int lemma_k = 4;
    auto* c_ver = app.add_subcommand("verify", "Monte Carlo lemma verifier");
    c_ver->add_option("--lemma", lemma, "1, 3, growth or pipeline")->required();
    c_ver->add_option("--alpha", alpha);
    c_ver->add_option("--samples", samples);
    c_ver->add_option("--seed", seed);
    c_ver->add_option("--budget", budget);
    c_ver->add_option("--k", lemma_k, "family index for lemma 1");
    c_ver->add_option("--out", out);

    std::string fig_id = "fig2";
    auto* c_fig = app.add_subcommand("figure", "render an SVG figure");
    c_fig->add_option("--id", fig_id)->required();
    c_fig->add_option("--alpha", alpha);
    c_fig->add_option("--out", out)->required();
    c_fig->add_option("--seed", seed);

    int iters = 100000, restarts = 8;
    auto* c_lyap = app.add_subcommand("lyapunov", "estimate the largest Lyapunov exponent");
    c_lyap->add_option("--alpha", alpha);
    c_lyap->add_option("--iters", iters);
    c_lyap->add_option("--seed", seed);
    c_lyap->add_option("--restarts", restarts);

    auto* c_rep = app.add_subcommand("report", "full verification suite, one JSON");
    c_rep->add_option("--alpha", alpha);
    c_rep->add_option("--samples", samples);
    c_rep->add_option("--seed", seed);
    c_rep->add_option("--k-max", k_max);
    c_rep->add_option("--budget", budget);
    c_rep->add_option("--out", out);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_thr->parsed()) return cmd_thresholds(out);
        if (c_part->parsed()) return cmd_partition(alpha, k_max, samples, seed, out);
        if (c_trace->parsed()) return cmd_trace(alpha, x0, y0, x1, y1, budget);
        if (c_ver->parsed()) return cmd_verify(lemma, alpha, samples, seed, budget, lemma_k, out);
        if (c_fig->parsed()) return cmd_figure(fig_id, alpha, out, seed);
        if (c_lyap->parsed()) return cmd_lyapunov(alpha, iters, seed, restarts);
        if (c_rep->parsed()) return cmd_report(alpha, samples, seed, k_max, budget, out);
    } catch (const domain_error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "internal error: %s\n", e.what());
        return 1;
    }
    return 2;
}
