#include "cli_support.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace cli;

constexpr const char* kBenchHeader =
    "method,k1,k2,p,q,trial,seed,stage1_s,stage2_s,total_s,err,ratio,mse,psnr_db,ssim,bound";

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

// ---- gen ------------------------------------------------------------------

struct GenArgs {
    std::string dims;
    size_t rank3 = 0;
    std::string decay = "fast";
    size_t r2cap = 0;
    uint64_t seed = 0;
    std::string out;
    std::string manifest;
};

int run_gen(const GenArgs& a) {
    const auto d = parse_dims(a.dims);
    if (d[0] * d[1] * d[2] < 2) invalid("--dims must describe at least two entries");
    osvd_decay decay;
    if (a.decay == "slow") {
        decay = OSVD_DECAY_SLOW;
    } else if (a.decay == "fast") {
        decay = OSVD_DECAY_FAST;
    } else {
        invalid("--decay must be 'slow' or 'fast'");
    }
    const size_t r2cap = a.r2cap == 0 ? std::min(d[0], d[1]) : a.r2cap;

    osvd_tensor* raw = nullptr;
    check(osvd_generate(d.data(), a.rank3, decay, r2cap, a.seed, &raw, nullptr));
    const Tensor t(raw);
    check(osvd_tensor_save(t.get(), a.out.c_str()));

    json m;
    m["command"] = "gen";
    m["version"] = osvd_version();
    m["output"] = a.out;
    m["dims"] = d;
    m["rank3"] = a.rank3;
    m["decay"] = a.decay;
    m["r2cap"] = r2cap;
    m["seed"] = a.seed;
    m["frob_norm"] = osvd_tensor_frob_norm(t.get());
    write_atomic(a.manifest.empty() ? a.out + ".json" : a.manifest, m.dump(2) + "\n");
    return kOk;
}

// ---- decompose -------------------------------------------------------------

struct DecomposeSpec {
    std::string method = "tosvd";
    size_t k1 = 0;
    std::vector<size_t> k2;
    size_t p = 5;
    size_t q0 = 0;
    std::vector<size_t> q;
    uint64_t seed = 0;
};

json spec_json(const DecomposeSpec& s) {
    json j;
    j["method"] = s.method;
    if (s.method == "osvd") return j;
    j["k1"] = s.k1;
    j["k2"] = s.k2;
    if (s.method == "rosvd") {
        j["p"] = s.p;
        j["q0"] = s.q0;
        j["q"] = s.q;
        j["seed"] = s.seed;
    }
    return j;
}

DecomposeSpec spec_from_json(const json& j) {
    DecomposeSpec s;
    try {
        s.method = j.at("method").get<std::string>();
        if (s.method == "osvd") return s;
        s.k1 = j.at("k1").get<size_t>();
        s.k2 = j.at("k2").get<std::vector<size_t>>();
        if (s.method == "rosvd") {
            s.p = j.at("p").get<size_t>();
            s.q0 = j.at("q0").get<size_t>();
            s.q = j.at("q").get<std::vector<size_t>>();
            s.seed = j.at("seed").get<uint64_t>();
        }
    } catch (const json::exception& e) {
        invalid(std::string("replay manifest: ") + e.what());
    }
    return s;
}

Factors decompose_once(const osvd_tensor* t, const DecomposeSpec& s) {
    osvd_factors* raw = nullptr;
    if (s.method == "osvd") {
        check(osvd_decompose_full(t, &raw));
    } else if (s.method == "tosvd") {
        check(osvd_decompose_truncated(t, s.k1, s.k2.data(), &raw));
    } else if (s.method == "rosvd") {
        const osvd_truncation spec{s.k1, s.k2.data(), s.p, s.q0, s.q.data(), s.seed};
        check(osvd_decompose_randomized(t, &spec, &raw));
    } else {
        invalid("--method must be osvd, tosvd or rosvd");
    }
    return Factors(raw);
}

struct DecomposeArgs {
    std::string input;
    std::string out;
    std::string method = "tosvd";
    size_t k1 = 0;
    std::string k2;
    size_t p = 5;
    size_t q0 = 0;
    std::string q = "0";
    uint64_t seed = 0;
    size_t repeats = 3;
    std::string replay;
};

int run_decompose(const DecomposeArgs& a) {
    DecomposeSpec spec;
    std::string input = a.input;
    size_t repeats = a.repeats;
    if (!a.replay.empty()) {
        const json m = read_json(fs::path(a.replay) / "manifest.json");
        const json extra = m.value("extra", json());
        if (!extra.is_object() || extra.value("command", "") != "decompose") {
            invalid("replay: " + a.replay + " was not written by decompose");
        }
        spec = spec_from_json(extra.at("spec"));
        if (input.empty()) input = extra.value("input", "");
    } else {
        spec.method = a.method;
        if (spec.method != "osvd") {
            if (a.k1 == 0) invalid("--k1 is required for " + spec.method);
            if (a.k2.empty()) invalid("--k2 is required for " + spec.method);
            spec.k1 = a.k1;
            spec.k2 = per_face(parse_list(a.k2, "--k2"), a.k1, "--k2");
            spec.p = a.p;
            spec.q0 = a.q0;
            spec.q = per_face(parse_list(a.q, "--q"), a.k1, "--q");
            spec.seed = a.seed;
        }
    }
    if (input.empty()) invalid("--input is required");
    if (repeats < 1) invalid("--repeats must be at least 1");

    const Tensor t = load_tensor(input);
    std::vector<double> stage1, stage2, total;
    Factors f;
    for (size_t r = 0; r < repeats; ++r) {
        const Stopwatch watch;
        f = decompose_once(t.get(), spec);
        total.push_back(watch.seconds());
        const osvd_timings tm = osvd_factors_timings(f.get());
        stage1.push_back(tm.stage1_seconds);
        stage2.push_back(tm.stage2_seconds);
    }
    const auto warnings = factor_warnings(f.get());
    print_warnings(warnings);

    json run;
    run["command"] = "decompose";
    run["version"] = osvd_version();
    run["input"] = fs::absolute(input).string();
    run["output"] = fs::absolute(a.out).string();
    run["spec"] = spec_json(spec);
    run["threads"] = osvd_worker_threads();
    run["repeats"] = repeats;
    run["timings"] = {{"stage1_seconds", median(stage1)},
                      {"stage2_seconds", median(stage2)},
                      {"total_seconds", median(total)},
                      {"statistic", "median"}};
    run["warnings"] = warnings;
    check(osvd_factors_save(f.get(), a.out.c_str(), run.dump().c_str()));

    size_t k1 = 0, k2max = 0;
    osvd_factors_shape(f.get(), nullptr, &k1, &k2max);
    std::cout << spec.method << ": k1=" << k1 << " k2max=" << k2max << " stage1_s=" << format_double(median(stage1))
              << " stage2_s=" << format_double(median(stage2)) << '\n';
    return kOk;
}

// ---- reconstruct -----------------------------------------------------------

int run_reconstruct(const std::string& factors_dir, const std::string& out) {
    osvd_factors* raw = nullptr;
    check(osvd_factors_load(factors_dir.c_str(), &raw));
    const Factors f(raw);
    osvd_tensor* t = nullptr;
    check(osvd_reconstruct(f.get(), &t));
    const Tensor rec(t);
    check(osvd_tensor_save(rec.get(), out.c_str()));
    return kOk;
}

// ---- metrics ---------------------------------------------------------------

std::string quality_row(const osvd_quality& q) {
    const size_t n = osvd_quality_csv_row(&q, nullptr, 0);
    std::string row(n + 1, '\0');
    osvd_quality_csv_row(&q, row.data(), row.size());
    row.resize(n);
    return row;
}

struct MetricsArgs {
    std::string original;
    std::string approx;
    std::string factors;
    uint64_t storage = 0;
    std::string out;
};

int run_metrics(const MetricsArgs& a) {
    uint64_t storage = a.storage;
    if (!a.factors.empty()) {
        osvd_factors* raw = nullptr;
        check(osvd_factors_load(a.factors.c_str(), &raw));
        const Factors f(raw);
        check(osvd_factors_storage_cost(f.get(), &storage));
    }
    if (storage == 0) invalid("metrics needs --factors or a positive --storage");
    const Tensor orig = load_tensor(a.original);
    const Tensor approx = load_tensor(a.approx);
    osvd_quality q{};
    check(osvd_quality_report(orig.get(), approx.get(), storage, &q));
    const std::string text = std::string(osvd_quality_csv_header()) + "\n" + quality_row(q) + "\n";
    if (a.out.empty()) {
        std::cout << text;
    } else {
        write_atomic(a.out, text);
    }
    return kOk;
}

// ---- bench -----------------------------------------------------------------

struct BenchArgs {
    std::string input;
    std::string methods = "tosvd,rosvd";
    size_t k1 = 0;
    std::string k2;
    std::string q = "1";
    size_t p = 5;
    size_t trials = 3;
    uint64_t seed = 0;
    std::string out;
};

struct TrialResult {
    double stage1, stage2, total, err, ratio, mse, psnr, ssim;
};

std::vector<std::string> split_names(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    for (std::string item; std::getline(ss, item, ',');) {
        if (item != "tosvd" && item != "rosvd") invalid("bench methods must be tosvd or rosvd, got '" + item + "'");
        out.push_back(item);
    }
    if (out.empty()) invalid("--methods is empty");
    return out;
}

int run_bench(const BenchArgs& a) {
    if (a.k1 == 0 || a.k2.empty()) invalid("--k1 and --k2 are required");
    if (a.trials < 1) invalid("--trials must be at least 1");
    const auto methods = split_names(a.methods);
    const auto k2_grid = parse_list(a.k2, "--k2");
    const auto q_grid = parse_list(a.q, "--q");

    const Tensor t = load_tensor(a.input);
    const auto dims = tensor_dims(t.get());
    const double norm = osvd_tensor_frob_norm(t.get());
    const size_t r2 = std::min(dims[0], dims[1]);
    Factors full;  // exact decomposition for the bound column, built on first use

    std::ostringstream csv;
    csv << kBenchHeader << '\n';
    for (const auto& method : methods) {
        for (size_t k2 : k2_grid) {
            const std::vector<std::optional<size_t>> qs =
                method == "rosvd" ? std::vector<std::optional<size_t>>(q_grid.begin(), q_grid.end())
                                  : std::vector<std::optional<size_t>>{std::nullopt};
            for (const auto& q : qs) {
                DecomposeSpec spec;
                spec.method = method;
                spec.k1 = a.k1;
                spec.k2.assign(a.k1, k2);
                spec.p = a.p;
                spec.q0 = q.value_or(0);
                spec.q.assign(a.k1, q.value_or(0));

                std::string bound;
                if (method == "rosvd" && a.p >= 2) {
                    if (!full) {
                        osvd_factors* raw = nullptr;
                        check(osvd_decompose_full(t.get(), &raw));
                        full.reset(raw);
                    }
                    std::vector<size_t> k2b(a.k1, std::min(k2, r2));
                    const osvd_truncation bspec{a.k1, k2b.data(), a.p, spec.q0, spec.q.data(), 0};
                    double b = 0.0;
                    check(osvd_error_bound(full.get(), &bspec, &b));
                    bound = format_double(b / norm);
                }

                const std::string prefix = method + "," + std::to_string(a.k1) + "," + std::to_string(k2) + "," +
                                           (method == "rosvd" ? std::to_string(a.p) : "") + "," +
                                           (q ? std::to_string(*q) : "") + ",";
                std::vector<TrialResult> results;
                for (size_t trial = 0; trial < a.trials; ++trial) {
                    spec.seed = a.seed + trial;
                    const Stopwatch watch;
                    const Factors f = decompose_once(t.get(), spec);
                    const double total = watch.seconds();
                    if (trial == 0) print_warnings(factor_warnings(f.get()));
                    osvd_tensor* raw = nullptr;
                    check(osvd_reconstruct(f.get(), &raw));
                    const Tensor rec(raw);
                    uint64_t storage = 0;
                    check(osvd_factors_storage_cost(f.get(), &storage));
                    osvd_quality qr{};
                    check(osvd_quality_report(t.get(), rec.get(), storage, &qr));
                    const osvd_timings tm = osvd_factors_timings(f.get());
                    results.push_back({tm.stage1_seconds, tm.stage2_seconds, total, qr.err, qr.ratio, qr.mse, qr.psnr,
                                       qr.ssim});
                    const TrialResult& r = results.back();
                    csv << prefix << trial << ',' << (method == "rosvd" ? std::to_string(spec.seed) : "") << ','
                        << format_double(r.stage1) << ',' << format_double(r.stage2) << ',' << format_double(r.total)
                        << ',' << format_double(r.err) << ',' << format_double(r.ratio) << ','
                        << format_double(r.mse) << ',' << format_double(r.psnr) << ',' << format_double(r.ssim) << ','
                        << bound << '\n';
                }
                const auto column = [&](double TrialResult::*field) {
                    std::vector<double> v;
                    for (const auto& r : results) v.push_back(r.*field);
                    return v;
                };
                for (const char* stat : {"mean", "stddev"}) {
                    const auto agg = [&](double TrialResult::*field) {
                        const auto v = column(field);
                        return format_double(std::string(stat) == "mean" ? mean(v) : stddev(v));
                    };
                    csv << prefix << stat << ",," << agg(&TrialResult::stage1) << ',' << agg(&TrialResult::stage2)
                        << ',' << agg(&TrialResult::total) << ',' << agg(&TrialResult::err) << ','
                        << agg(&TrialResult::ratio) << ',' << agg(&TrialResult::mse) << ','
                        << agg(&TrialResult::psnr) << ',' << agg(&TrialResult::ssim) << ','
                        << (std::string(stat) == "mean" ? bound : "") << '\n';
                }
            }
        }
    }
    if (a.out.empty()) {
        std::cout << csv.str();
    } else {
        write_atomic(a.out, csv.str());
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Oriented SVD toolkit for third-order tensors"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(osvd_version()));

    GenArgs gen;
    auto* g = app.add_subcommand("gen", "Generate a synthetic oriented tensor");
    g->add_option("--dims", gen.dims, "Dimensions I1xI2xI3")->required();
    g->add_option("--rank3", gen.rank3, "Mode-3 rank R3")->required();
    g->add_option("--decay", gen.decay, "Core decay pattern: slow or fast")->capture_default_str();
    g->add_option("--r2cap", gen.r2cap, "Non-zero core entries per face (default min(I1, I2))");
    g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
    g->add_option("--out", gen.out, "Output OT3 file")->required();
    g->add_option("--manifest", gen.manifest, "Manifest path (default <out>.json)");

    DecomposeArgs dec;
    auto* d = app.add_subcommand("decompose", "Decompose a tensor into O-SVD factors");
    d->add_option("--input", dec.input, "Input OT3 file");
    d->add_option("--out", dec.out, "Output factor directory")->required();
    d->add_option("--method", dec.method, "osvd, tosvd or rosvd")->capture_default_str();
    d->add_option("--k1", dec.k1, "Number of faces");
    d->add_option("--k2", dec.k2, "Face rank, scalar or comma list of k1 entries");
    d->add_option("--p", dec.p, "Oversampling")->capture_default_str();
    d->add_option("--q0", dec.q0, "Power iterations for the mode-3 sketch")->capture_default_str();
    d->add_option("--q", dec.q, "Power iterations per face, scalar or list")->capture_default_str();
    d->add_option("--seed", dec.seed, "Random seed")->capture_default_str();
    d->add_option("--repeats", dec.repeats, "Timed repetitions; the manifest keeps medians")->capture_default_str();
    d->add_option("--replay", dec.replay, "Re-run the decomposition recorded in a factor directory");

    std::string factors_dir, rec_out;
    auto* r = app.add_subcommand("reconstruct", "Rebuild a dense tensor from factors");
    r->add_option("--factors", factors_dir, "Factor directory")->required();
    r->add_option("--out", rec_out, "Output OT3 file")->required();

    MetricsArgs met;
    auto* m = app.add_subcommand("metrics", "Quality of a reconstruction as CSV");
    m->add_option("--original", met.original, "Original OT3 file")->required();
    m->add_option("--approx", met.approx, "Reconstructed OT3 file")->required();
    m->add_option("--factors", met.factors, "Factor directory used for the storage cost");
    m->add_option("--storage", met.storage, "Storage cost in entries");
    m->add_option("--out", met.out, "CSV output file (default stdout)");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "Time and score a grid of decompositions");
    b->add_option("--input", bench.input, "Input OT3 file")->required();
    b->add_option("--methods", bench.methods, "Comma list of tosvd, rosvd")->capture_default_str();
    b->add_option("--k1", bench.k1, "Number of faces")->required();
    b->add_option("--k2", bench.k2, "Comma list of face ranks")->required();
    b->add_option("--q", bench.q, "Comma list of power iteration counts (rosvd)")->capture_default_str();
    b->add_option("--p", bench.p, "Oversampling")->capture_default_str();
    b->add_option("--trials", bench.trials, "Trials per cell")->capture_default_str();
    b->add_option("--seed", bench.seed, "Seed of the first trial")->capture_default_str();
    b->add_option("--out", bench.out, "CSV output file (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kValidation;
    }

    try {
        if (*g) return run_gen(gen);
        if (*d) return run_decompose(dec);
        if (*r) return run_reconstruct(factors_dir, rec_out);
        if (*m) return run_metrics(met);
        if (*b) return run_bench(bench);
    } catch (const Failure& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInternal;
    }
    return kInternal;
}
