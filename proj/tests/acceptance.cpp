// Acceptance run: one PASS/FAIL line per criterion.
//   acceptance [--criterion N]...
// Exit status 0 when every selected criterion passes, 1 otherwise.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "cubicshape/enumerate.hpp"
#include "cubicshape/verify.hpp"
#include "cubicshape/weyl.hpp"
#include "oracles/form_oracles.hpp"

using namespace cubicshape;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

// A suite restricted to rows whose check name starts with one of `prefixes`.
Outcome from_suite(const SuiteResult& s, const std::vector<std::string>& prefixes = {})
{
    std::size_t n = 0, bad = 0;
    std::string first;
    for (const auto& r : s.rows) {
        bool keep = prefixes.empty();
        for (const auto& p : prefixes)
            keep = keep || r.check.rfind(p, 0) == 0;
        if (!keep)
            continue;
        ++n;
        if (!r.pass) {
            if (!bad)
                first = r.check + " [" + r.point + "] value " + fmt_double(r.value) + " reference " +
                        fmt_double(r.reference);
            ++bad;
        }
    }
    Outcome o{n > 0 && bad == 0, std::to_string(n) + " checks, " + std::to_string(bad) + " failed"};
    if (bad)
        o.detail += "; first: " + first;
    return o;
}

Outcome within(Outcome o, double seconds, double limit)
{
    o.detail += ", " + fmt("%.1f s", seconds);
    if (seconds > limit) {
        o.pass = false;
        o.detail += " (limit " + fmt("%.0f", limit) + " s)";
    }
    return o;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome criterion_6()
{
    const std::int64_t X = 2000, box = 30;
    auto pos = enumerate_classes(X, 1, {.workers = workers()});
    auto neg = enumerate_classes(X, -1, {.workers = workers()});
    const auto part = oracle::orbit_partition(box, X);
    std::unordered_map<BinaryCubicForm, int, oracle::FormHash> where;
    std::vector<char> irreducible(part.components, 0);
    for (std::size_t i = 0; i < part.forms.size(); ++i) {
        where.emplace(part.forms[i], part.component[i]);
        if (!is_reducible(part.forms[i]))
            irreducible[part.component[i]] = 1;
    }
    std::vector<int> hits(part.components, 0);
    std::size_t outside = 0;
    for (const auto* list : {&pos, &neg})
        for (const auto& c : *list) {
            auto it = where.find(c.rep);
            if (it == where.end())
                ++outside;
            else
                ++hits[it->second];
        }
    std::size_t orbits = 0, mismatched = 0;
    for (int id = 0; id < part.components; ++id) {
        orbits += irreducible[id];
        if (hits[id] != (irreducible[id] ? 1 : 0))
            ++mismatched;
    }
    auto small = enumerate_classes(25, -1);
    bool minus23 = small.size() == 1 && small[0].disc == -23;
    Outcome o;
    o.pass = outside == 0 && mismatched == 0 && orbits == pos.size() + neg.size() && minus23;
    o.detail = std::to_string(pos.size()) + " + " + std::to_string(neg.size()) + " classes vs " +
               std::to_string(orbits) + " oracle orbits, " + std::to_string(mismatched) + " mismatched; X=25 gives " +
               (small.size() == 1 ? std::to_string(small[0].disc) : std::to_string(small.size()) + " classes");
    return o;
}

Outcome criterion_9()
{
    const std::vector<double> grid{1e5, 3e5, 1e6, 3e6, 1e7};
    const std::uint64_t X = 10000000;
    const TestFunction F;
    bool ok = true;
    std::string detail;
    for (int sign : {1, -1}) {
        auto classes = enumerate_classes(X, sign, {.workers = workers()});
        auto fields = s3_field_shapes(classes, workers());
        classes.clear();
        classes.shrink_to_fit();
        auto rep = compare_report(1.0, F, grid, sign, 100000, fields, X, workers());
        EisensteinSeries Em(Complex(0.0, -1.0), 1e-13);
        double reality = 0, conj_defect = 0, lo = 1e300, hi = 0;
        for (const auto& w : rep.records) {
            reality = std::max(reality, w.reality_defect);
            auto m = weyl_sum_empirical(Em, F, w.X, sign, fields, X, workers());
            conj_defect = std::max(conj_defect, std::abs(m.value - std::conj(w.empirical)) / std::abs(w.empirical));
            lo = std::min(lo, w.norm_dev);
            hi = std::max(hi, w.norm_dev);
        }
        const double spread = hi / lo;
        const bool a = reality < 1e-6, b = conj_defect < 1e-8, c = std::abs(rep.slope - 0.92) <= 0.20,
                   d = spread < 10.0;
        ok = ok && a && b && c && d;
        detail += std::string(sign > 0 ? "pos" : "neg") + ": (a) " + fmt("%.1e", reality) + (a ? "" : " FAIL") +
                  " (b) " + fmt("%.1e", conj_defect) + (b ? "" : " FAIL") + " (c) slope " + fmt("%.3f", rep.slope) +
                  (c ? "" : " FAIL") + " (d) spread " + fmt("%.1f", spread) + (d ? "" : " FAIL") + "; ";
    }
    detail.resize(detail.size() - 2);
    return {ok, detail};
}

#ifndef CUBICSHAPE_CLI_PATH
#error "CUBICSHAPE_CLI_PATH must name the cubicshape executable"
#endif

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// enumerate -> shapes -> weyl -> main-term at X = 1e4, three times
Outcome criterion_10()
{
    const fs::path root = fs::temp_directory_path() / "cubicshape_acceptance_10";
    fs::remove_all(root);
    const std::vector<std::pair<std::string, int>> runs{{"w1", 1}, {"w1_again", 1}, {"w4", 4}};
    std::vector<std::string> artifacts;
    for (const auto& [name, w] : runs) {
        const fs::path dir = root / name;
        fs::create_directories(dir);
        for (const char* sign : {"pos", "neg"}) {
            const std::string base = (dir / (std::string("forms_") + sign)).string();
            const std::string ws = " --workers " + std::to_string(w);
            const std::vector<std::string> cmds{
                "enumerate --max-disc 1e4 --sign " + std::string(sign) + " --out " + base + ".jsonl" + ws,
                "shapes --cache " + base + ".jsonl" + ws,
                "weyl --cache " + base + ".shapes.jsonl --sign " + sign + " --r 1 --x 5e3 --x 1e4 --out " + base +
                    ".weyl.csv" + ws,
                "main-term --sign " + std::string(sign) + " --r 1 --x 5e3 --x 1e4 --out " + base + ".main.csv"};
            for (const auto& c : cmds) {
                const std::string line = std::string(CUBICSHAPE_CLI_PATH) + " " + c + " 2>/dev/null";
                if (std::system(line.c_str()) != 0)
                    return {false, "command failed: " + c};
            }
            if (name == "w1")
                for (const char* ext : {".jsonl", ".shapes.jsonl", ".weyl.csv", ".main.csv"})
                    artifacts.push_back(std::string("forms_") + sign + ext);
        }
    }
    std::size_t differing = 0;
    std::string first;
    for (const auto& a : artifacts) {
        const std::string ref = slurp(root / "w1" / a);
        for (const char* other : {"w1_again", "w4"})
            if (slurp(root / other / a) != ref) {
                if (!differing)
                    first = std::string(other) + "/" + a;
                ++differing;
            }
    }
    fs::remove_all(root);
    Outcome o{differing == 0 && !artifacts.empty(), std::to_string(artifacts.size()) +
                                                         " artifacts compared over 3 runs, " +
                                                         std::to_string(differing) + " differ"};
    if (differing)
        o.detail += "; first: " + first;
    return o;
}

struct Criterion {
    int id;
    const char* title;
    double limit_seconds;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> all{
        {1, "DFT of N_p at (0,0,0,m) and (0,0,3m,n)", 120, [] { return from_suite(verify_dft()); }},
        {2, "reducible DFT closed forms and singular tables", 120,
         [] { return from_suite(verify_reducible_dft()); }},
        {3, "square-root counting", 1e9, [] { return from_suite(verify_sqrt_count()); }},
        {4, "special-function integral identities", 60, [] { return from_suite(verify_identities()); }},
        {5, "Eisenstein functional equation, series agreement, reality", 1e9,
         [] {
             return from_suite(verify_eisenstein(),
                               {"functional equation", "lattice sum", "coprime sum", "reality"});
         }},
        {6, "enumeration against the orbit oracle to 2000", 300, criterion_6},
        {7, "Hessian identity", 1e9, [] { return from_suite(verify_reduction(), {"hessian"}); }},
        {8, "shape invariants", 1e9,
         [] { return from_suite(verify_reduction(), {"shape class invariance", "cyclic classes hexagonal"}); }},
        {9, "Weyl sums at r = 1 up to 1e7", 900, criterion_9},
        {10, "byte-stable pipeline across reruns and workers", 1e9, criterion_10},
    };

    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--criterion" && i + 1 < argc) {
            selected.push_back(std::atoi(argv[++i]));
        } else {
            std::cerr << "usage: acceptance [--criterion N]...\n";
            return 2;
        }
    }

    bool ok = true;
    for (const auto& c : all) {
        if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end())
            continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o = within(o, secs, c.limit_seconds);
        ok = ok && o.pass;
        std::cout << "criterion " << c.id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << c.title << " -- "
                  << o.detail << std::endl;
    }
    return ok ? 0 : 1;
}
