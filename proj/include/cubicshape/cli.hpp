#pragma once

// `cubicshape` command line: enumerate, shapes, weyl, main-term, verify.
// Exit codes: 0 ok, 1 verification failure, 2 usage, 3 resource or cache.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cache.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "shapes.hpp"
#include "verify.hpp"
#include "weyl.hpp"

namespace cubicshape {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitResource = 3 };

namespace cli {

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline double parse_positive(const std::string& s, const char* what)
{
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError(std::string(what) + ": not a number: " + s);
    }
    if (used != s.size() || !(v > 0) || !std::isfinite(v))
        throw UsageError(std::string(what) + ": expected a positive number, got " + s);
    return v;
}

inline std::uint64_t parse_disc_bound(const std::string& s)
{
    double v = parse_positive(s, "--max-disc");
    if (v != std::floor(v) || v > 1e18)
        throw UsageError("--max-disc must be a positive integer");
    return static_cast<std::uint64_t>(v);
}

inline TestFunction parse_support(const std::string& s)
{
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw UsageError("--support expects lo,hi");
    TestFunction F;
    F.lo = parse_positive(s.substr(0, comma), "--support");
    F.hi = parse_positive(s.substr(comma + 1), "--support");
    if (!(F.hi > F.lo))
        throw UsageError("--support needs lo < hi");
    return F;
}

inline std::filesystem::path cache_dir()
{
    const char* env = std::getenv("CUBICSHAPE_CACHE_DIR");
    return env && *env ? std::filesystem::path(env) : std::filesystem::path(".");
}

inline std::filesystem::path default_cache_path(int sign, std::uint64_t X)
{
    return cache_dir() / ("forms_" + sign_name(sign) + "_" + std::to_string(X) + ".jsonl");
}

// Output target: a file (with manifest) or stdout for "-".
class Output {
public:
    explicit Output(const std::string& path) : path_(path)
    {
        if (path_ != "-")
            writer_.emplace(path_);
    }
    std::ostream& stream() { return writer_ ? writer_->stream() : std::cout; }
    void finish(RunManifest& m, std::chrono::steady_clock::time_point start)
    {
        if (!writer_) {
            std::cout.flush();
            return;
        }
        writer_->commit();
        m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        write_manifest(path_, m);
    }

private:
    std::string path_;
    std::optional<AtomicWriter> writer_;
};

inline std::string num(double v) { return fmt_double(v); }

struct EnumerateArgs {
    std::string max_disc;
    std::string sign;
    std::string out;
    unsigned workers = 1;
    std::uint64_t max_classes = 0;
};

inline int cmd_enumerate(const EnumerateArgs& a)
{
    const auto start = std::chrono::steady_clock::now();
    const std::uint64_t X = parse_disc_bound(a.max_disc);
    const int sign = parse_sign(a.sign);
    if (X > kMaxEnumerationDisc)
        throw ResourceLimit("enumeration is limited to |disc| <= 1e8");
    const std::filesystem::path out = a.out.empty() ? default_cache_path(sign, X) : std::filesystem::path(a.out);
    const SearchBox box = search_box(X, sign);
    const json identity = checkpoint_identity(X, sign, box);
    const std::filesystem::path ckpt = out.string() + ".ckpt";

    EnumerateOptions opt;
    opt.workers = a.workers;
    opt.max_classes = a.max_classes;
    if (std::filesystem::exists(ckpt)) {
        opt.resume = read_checkpoint(ckpt, identity);
        std::cerr << "resuming from " << ckpt << " (" << opt.resume.size() << " tasks done)\n";
    }
    CheckpointWriter writer(ckpt, identity, false);
    for (const auto& [task, cls] : opt.resume)
        writer.add(task, cls);
    writer.flush();
    opt.on_task = [&](std::size_t task, const std::vector<FormClass>& cls) { writer.add(task, cls); };

    std::vector<FormClass> classes;
    try {
        classes = enumerate_classes(X, sign, opt);
    } catch (...) {
        writer.flush();
        throw;
    }

    RunManifest m;
    m.subcommand = "enumerate";
    m.flags = json{{"max_disc", X}, {"sign", sign_name(sign)}};
    m.workers = a.workers;
    CacheHeader h;
    h.kind = "cubicforms";
    h.version = kToolVersion;
    h.sign = sign;
    h.max_disc = X;
    h.extra = json{{"search_box", search_box_json(box)}, {"run", m.deterministic()}};
    write_class_cache(out, h, classes);
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    m.report = json{{"classes", classes.size()}};
    write_manifest(out, m);
    std::error_code ec;
    std::filesystem::remove(ckpt, ec);
    std::cerr << classes.size() << " classes written to " << out.string() << '\n';
    return kExitOk;
}

struct ShapesArgs {
    std::string cache;
    std::string out;
    unsigned workers = 1;
};

inline int cmd_shapes(const ShapesArgs& a)
{
    const auto start = std::chrono::steady_clock::now();
    ClassCache in = read_class_cache(a.cache);
    if (in.header.kind != "cubicforms")
        throw CacheError("shapes needs an enumeration cache, got " + in.header.kind);
    std::vector<LatticeShape> shapes(in.classes.size());
    parallel_tasks(in.classes.size(), a.workers, [&](std::size_t i) {
        if (!in.classes[i].reducible)
            shapes[i] = shape(in.classes[i].rep);
    });

    RunManifest m;
    m.subcommand = "shapes";
    m.inputs = json{{std::filesystem::path(a.cache).filename().string(), fnv1a_file(a.cache)}};
    m.workers = a.workers;
    std::string out = a.out.empty() ? std::filesystem::path(a.cache).replace_extension(".shapes.jsonl").string() : a.out;
    Output o(out);
    CacheHeader h = in.header;
    h.kind = "shapes";
    h.extra = json{{"search_box", in.header.extra.value("search_box", json::object())}, {"run", m.deterministic()}};
    std::size_t rows = 0;
    for (std::size_t i = 0; i < in.classes.size(); ++i)
        rows += !in.classes[i].reducible;
    h.count = rows;
    o.stream() << header_to_json(h).dump() << '\n';
    for (std::size_t i = 0; i < in.classes.size(); ++i) {
        if (in.classes[i].reducible)
            continue;
        json j = class_to_json(in.classes[i]);
        j["tau_re"] = shapes[i].tau.real();
        j["tau_im"] = shapes[i].tau.imag();
        j["iwasawa_t"] = shapes[i].iwasawa_t;
        j["iwasawa_u"] = shapes[i].iwasawa_u;
        o.stream() << j.dump() << '\n';
    }
    o.finish(m, start);
    return kExitOk;
}

struct SeriesArgs {
    double r = 1.0;
    std::vector<std::string> x;
    std::string sign = "pos";
    std::string support = "0.5,1";
    std::uint32_t prime_bound = 100000;
    std::string cache;
    std::string out = "-";
    unsigned workers = 1;
};

inline std::vector<double> parse_grid(const std::vector<std::string>& xs)
{
    std::vector<double> g;
    for (const auto& s : xs)
        g.push_back(parse_positive(s, "--x"));
    if (g.empty())
        throw UsageError("at least one --x is required");
    return g;
}

inline int cmd_main_term(const SeriesArgs& a)
{
    const auto start = std::chrono::steady_clock::now();
    const int sign = parse_sign(a.sign);
    const TestFunction F = parse_support(a.support);
    const auto grid = parse_grid(a.x);
    if (a.r == 0.0)
        throw UsageError("--r must be nonzero");
    if (a.prime_bound < 100)
        throw UsageError("--prime-bound must be >= 100");
    RunManifest m;
    m.subcommand = "main-term";
    m.flags = json{{"r", a.r}, {"x", grid}, {"sign", sign_name(sign)}, {"support", {F.lo, F.hi}},
                   {"prime_bound", a.prime_bound}};
    Output o(a.out);
    o.stream() << "X,term1_re,term1_im,term2_re,term2_im,S_main_re,S_main_im,euler_tail\n";
    for (double X : grid) {
        auto t = weyl_main_term(a.r, F, X, sign, a.prime_bound);
        o.stream() << num(X) << ',' << num(t.first.real()) << ',' << num(t.first.imag()) << ','
                   << num(t.second.real()) << ',' << num(t.second.imag()) << ',' << num(t.total().real()) << ','
                   << num(t.total().imag()) << ',' << num(t.euler_tail) << '\n';
    }
    o.finish(m, start);
    return kExitOk;
}

inline int cmd_weyl(const SeriesArgs& a)
{
    const auto start = std::chrono::steady_clock::now();
    const int sign = parse_sign(a.sign);
    const TestFunction F = parse_support(a.support);
    const auto grid = parse_grid(a.x);
    if (a.r == 0.0)
        throw UsageError("--r must be nonzero");
    if (a.prime_bound < 100)
        throw UsageError("--prime-bound must be >= 100");
    double need = 0;
    for (double X : grid)
        need = std::max(need, X * F.hi);
    const std::filesystem::path cache =
        a.cache.empty() ? default_cache_path(sign, static_cast<std::uint64_t>(std::ceil(need))) : std::filesystem::path(a.cache);
    if (!std::filesystem::exists(cache))
        throw CacheError("cache " + cache.string() + " not found; run enumerate first");
    ClassCache in = read_class_cache(cache);
    if (in.header.sign != sign)
        throw CacheError("cache holds sign " + sign_name(in.header.sign) + ", need " + sign_name(sign));
    if (need > static_cast<double>(in.header.max_disc))
        throw CacheError("cache covers |disc| <= " + std::to_string(in.header.max_disc) + ", need " + num(need));

    std::vector<ShapedClass> fields;
    if (in.header.kind == "shapes") {
        for (std::size_t i = 0; i < in.classes.size(); ++i) {
            const auto& c = in.classes[i];
            if (c.maximal && !c.reducible && !is_cyclic_class(c))
                fields.push_back({c, in.shapes[i]});
        }
    } else {
        fields = s3_field_shapes(in.classes, a.workers);
    }
    in.classes.clear();

    auto rep = compare_report(a.r, F, grid, sign, a.prime_bound, fields, in.header.max_disc, a.workers);
    RunManifest m;
    m.subcommand = "weyl";
    m.flags = json{{"r", a.r}, {"x", grid}, {"sign", sign_name(sign)}, {"support", {F.lo, F.hi}},
                   {"prime_bound", a.prime_bound}};
    m.inputs = json{{cache.filename().string(), fnv1a_file(cache)}};
    m.workers = a.workers;
    double worst_reality = 0;
    for (const auto& w : rep.records)
        worst_reality = std::max(worst_reality, w.reality_defect);
    m.report = json{{"slope", rep.slope}, {"max_reality_defect", worst_reality}, {"euler_tail", rep.euler_tail}};
    Output o(a.out);
    o.stream() << "X,count,S_emp_re,S_emp_im,S_main_re,S_main_im,abs_dev,norm_dev\n";
    for (const auto& w : rep.records)
        o.stream() << num(w.X) << ',' << w.count << ',' << num(w.empirical.real()) << ',' << num(w.empirical.imag())
                   << ',' << num(w.main.real()) << ',' << num(w.main.imag()) << ',' << num(w.abs_dev) << ','
                   << num(w.norm_dev) << '\n';
    o.finish(m, start);
    std::cerr << "log-log slope of |S_emp|: " << num(rep.slope) << ", max reality defect " << num(worst_reality)
              << '\n';
    return kExitOk;
}

struct VerifyArgs {
    std::string suite;
    std::string out = "-";
};

inline int cmd_verify(const VerifyArgs& a)
{
    const auto start = std::chrono::steady_clock::now();
    SuiteResult s = run_suite(a.suite);
    RunManifest m;
    m.subcommand = "verify";
    m.flags = json{{"suite", a.suite}};
    m.report = json{{"checks", s.rows.size()}, {"failures", s.failures()}};
    Output o(a.out);
    write_suite_csv(o.stream(), s);
    o.finish(m, start);
    std::cerr << "suite " << a.suite << ": " << s.rows.size() << " checks, " << s.failures() << " failed\n";
    for (const auto& r : s.rows)
        if (!r.pass)
            std::cerr << "  FAIL " << r.check << " [" << r.point << "] value " << num(r.value) << " reference "
                      << num(r.reference) << '\n';
    return s.passed() ? kExitOk : kExitVerifyFailed;
}

} // namespace cli

inline int run_cli(int argc, const char* const* argv)
{
    CLI::App app{"Cubic fields via binary cubic forms: enumeration, lattice shapes, Eisenstein Weyl sums"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    cli::EnumerateArgs ea;
    auto* en = app.add_subcommand("enumerate", "tabulate GL2(Z)-classes of irreducible cubic forms");
    en->add_option("--max-disc", ea.max_disc, "bound X on |disc|")->required();
    en->add_option("--sign", ea.sign, "pos or neg")->required()->check(CLI::IsMember({"pos", "neg"}));
    en->add_option("--out", ea.out, "JSONL cache path (default $CUBICSHAPE_CACHE_DIR/forms_<sign>_<X>.jsonl)");
    en->add_option("--workers", ea.workers, "worker threads")->check(CLI::Range(1u, 1024u));
    en->add_option("--max-classes", ea.max_classes, "stop with exit 3 past this many classes (0 = no limit)");

    cli::ShapesArgs sa;
    auto* sh = app.add_subcommand("shapes", "append lattice shapes to an enumeration cache");
    sh->add_option("--cache", sa.cache, "enumeration JSONL")->required();
    sh->add_option("--out", sa.out, "output JSONL (default: cache path with extension .shapes.jsonl, - for stdout)");
    sh->add_option("--workers", sa.workers, "worker threads")->check(CLI::Range(1u, 1024u));

    cli::SeriesArgs wa;
    auto* we = app.add_subcommand("weyl", "empirical Weyl sums against the two-term main term");
    cli::SeriesArgs ma;
    auto* mt = app.add_subcommand("main-term", "evaluate the two-term main term");
    for (auto [cmd, args] : {std::pair{we, &wa}, std::pair{mt, &ma}}) {
        cmd->add_option("--r", args->r, "spectral parameter, z = ir");
        cmd->add_option("--x", args->x, "X values (repeatable)")->required();
        cmd->add_option("--sign", args->sign, "pos or neg")->check(CLI::IsMember({"pos", "neg"}));
        cmd->add_option("--support", args->support, "test function support lo,hi");
        cmd->add_option("--prime-bound", args->prime_bound, "Euler product cut-off");
        cmd->add_option("--out", args->out, "CSV path, - for stdout");
    }
    we->add_option("--cache", wa.cache, "enumeration or shapes JSONL");
    we->add_option("--workers", wa.workers, "worker threads")->check(CLI::Range(1u, 1024u));

    cli::VerifyArgs va;
    auto* ve = app.add_subcommand("verify", "run an invariant suite");
    ve->add_option("--suite", va.suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
    ve->add_option("--out", va.out, "CSV path, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (en->parsed())
            return cli::cmd_enumerate(ea);
        if (sh->parsed())
            return cli::cmd_shapes(sa);
        if (we->parsed())
            return cli::cmd_weyl(wa);
        if (mt->parsed())
            return cli::cmd_main_term(ma);
        if (ve->parsed())
            return cli::cmd_verify(va);
    } catch (const ResourceLimit& e) {
        std::cerr << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const CacheError& e) {
        std::cerr << "cache error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "file error: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitResource;
    }
    return kExitUsage;
}

} // namespace cubicshape
