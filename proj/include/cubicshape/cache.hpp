#pragma once

// JSONL class caches, checkpoints and run manifests.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cubicforms.hpp"
#include "enumerate.hpp"
#include "errors.hpp"
#include "shapes.hpp"

namespace cubicshape {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr std::uint64_t kCheckpointEvery = 100000; // classes per checkpoint flush

using nlohmann::json;

inline std::string sign_name(int sign) { return sign > 0 ? "pos" : "neg"; }

inline int parse_sign(const std::string& s)
{
    if (s == "pos" || s == "+" || s == "+1")
        return 1;
    if (s == "neg" || s == "-" || s == "-1")
        return -1;
    throw std::invalid_argument("sign must be pos or neg");
}

// 64-bit FNV-1a over the file bytes, as 16 hex digits.
inline std::string fnv1a_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw CacheError("cannot read " + path.string());
    std::uint64_t h = 1469598103934665603ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return out;
}

inline json class_to_json(const FormClass& c)
{
    json j;
    j["a"] = c.rep.a;
    j["b"] = c.rep.b;
    j["c"] = c.rep.c;
    j["d"] = c.rep.d;
    j["disc"] = c.disc;
    j["stab"] = c.stab_order;
    j["maximal"] = c.maximal;
    if (c.reducible)
        j["reducible"] = true;
    return j;
}

inline FormClass class_from_json(const json& j)
{
    FormClass c;
    c.rep = {j.at("a").get<std::int64_t>(), j.at("b").get<std::int64_t>(), j.at("c").get<std::int64_t>(),
             j.at("d").get<std::int64_t>()};
    c.disc = j.at("disc").get<std::int64_t>();
    c.stab_order = j.at("stab").get<int>();
    c.maximal = j.at("maximal").get<bool>();
    c.reducible = j.value("reducible", false);
    return c;
}

inline json search_box_json(const SearchBox& box)
{
    return json{{"a_max", box.a_max}, {"b_radius", box.b_radius}, {"slack", box.slack}, {"tasks", box.tasks}};
}

struct CacheHeader {
    std::string kind; // "cubicforms" or "shapes"
    std::string version;
    int sign = 1;
    std::uint64_t max_disc = 0;
    std::uint64_t count = 0;
    json extra; // search box, source hash, run description
};

inline json header_to_json(const CacheHeader& h)
{
    json j = h.extra.is_object() ? h.extra : json::object();
    j["kind"] = h.kind;
    j["version"] = h.version;
    j["sign"] = sign_name(h.sign);
    j["max_disc"] = h.max_disc;
    j["count"] = h.count;
    return j;
}

inline CacheHeader header_from_json(const json& j)
{
    CacheHeader h;
    h.kind = j.at("kind").get<std::string>();
    h.version = j.at("version").get<std::string>();
    h.sign = parse_sign(j.at("sign").get<std::string>());
    h.max_disc = j.at("max_disc").get<std::uint64_t>();
    h.count = j.at("count").get<std::uint64_t>();
    h.extra = j;
    return h;
}

// Writes to <path>.tmp and renames, so a crash never leaves a truncated cache.
class AtomicWriter {
public:
    explicit AtomicWriter(std::filesystem::path path) : path_(std::move(path)), tmp_(path_.string() + ".tmp")
    {
        out_.open(tmp_, std::ios::binary | std::ios::trunc);
        if (!out_)
            throw CacheError("cannot write " + tmp_.string());
    }

    std::ostream& stream() { return out_; }

    void commit()
    {
        out_.flush();
        if (!out_)
            throw CacheError("write failed for " + tmp_.string());
        out_.close();
        std::error_code ec;
        std::filesystem::rename(tmp_, path_, ec);
        if (ec)
            throw CacheError("cannot rename " + tmp_.string() + ": " + ec.message());
    }

    ~AtomicWriter()
    {
        if (out_.is_open()) {
            out_.close();
            std::error_code ec;
            std::filesystem::remove(tmp_, ec);
        }
    }

private:
    std::filesystem::path path_, tmp_;
    std::ofstream out_;
};

inline void write_class_cache(const std::filesystem::path& path, const CacheHeader& header,
                              const std::vector<FormClass>& classes)
{
    AtomicWriter w(path);
    CacheHeader h = header;
    h.count = classes.size();
    w.stream() << header_to_json(h).dump() << '\n';
    for (const auto& c : classes)
        w.stream() << class_to_json(c).dump() << '\n';
    w.commit();
}

struct ClassCache {
    CacheHeader header;
    std::vector<FormClass> classes;
    std::vector<LatticeShape> shapes; // filled for "shapes" caches
};

inline ClassCache read_class_cache(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw CacheError("cannot open cache " + path.string());
    ClassCache out;
    std::string line;
    if (!std::getline(in, line))
        throw CacheError("empty cache " + path.string());
    try {
        out.header = header_from_json(json::parse(line));
    } catch (const json::exception& e) {
        throw CacheError("bad cache header in " + path.string() + ": " + e.what());
    }
    const bool shaped = out.header.kind == "shapes";
    if (!shaped && out.header.kind != "cubicforms")
        throw CacheError("unknown cache kind " + out.header.kind);
    out.classes.reserve(out.header.count);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        try {
            json j = json::parse(line);
            out.classes.push_back(class_from_json(j));
            if (shaped) {
                LatticeShape s;
                s.tau = Complex(j.at("tau_re").get<double>(), j.at("tau_im").get<double>());
                s.iwasawa_t = j.at("iwasawa_t").get<double>();
                s.iwasawa_u = j.at("iwasawa_u").get<double>();
                out.shapes.push_back(s);
            }
        } catch (const json::exception& e) {
            throw CacheError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (out.classes.size() != out.header.count)
        throw CacheError("cache " + path.string() + " is truncated");
    return out;
}

// ---------------------------------------------------------------------------
// checkpoints: <out>.ckpt, one line per finished enumeration task

inline json checkpoint_identity(std::uint64_t X, int sign, const SearchBox& box)
{
    return json{{"kind", "checkpoint"}, {"version", kToolVersion}, {"sign", sign_name(sign)},
                {"max_disc", X},        {"box", search_box_json(box)}};
}

class CheckpointWriter {
public:
    CheckpointWriter(std::filesystem::path path, const json& identity, bool append)
        : path_(std::move(path))
    {
        out_.open(path_, append ? std::ios::app : std::ios::trunc);
        if (!out_)
            throw CacheError("cannot write checkpoint " + path_.string());
        if (!append) {
            out_ << identity.dump() << '\n';
            out_.flush();
        }
    }

    void add(std::size_t task, const std::vector<FormClass>& classes)
    {
        json rows = json::array();
        for (const auto& c : classes)
            rows.push_back(json::array({c.rep.a, c.rep.b, c.rep.c, c.rep.d, c.disc, c.stab_order, c.maximal ? 1 : 0}));
        buffer_ += json{{"task", task}, {"classes", rows}}.dump();
        buffer_ += '\n';
        pending_ += classes.size();
        if (pending_ >= kCheckpointEvery)
            flush();
    }

    void flush()
    {
        out_ << buffer_;
        out_.flush();
        if (!out_)
            throw CacheError("checkpoint write failed");
        buffer_.clear();
        pending_ = 0;
    }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::string buffer_;
    std::uint64_t pending_ = 0;
};

// Finished tasks from a checkpoint; a torn last line is ignored.
inline std::map<std::size_t, std::vector<FormClass>> read_checkpoint(const std::filesystem::path& path,
                                                                     const json& identity)
{
    std::ifstream in(path);
    if (!in)
        throw CacheError("cannot open checkpoint " + path.string());
    std::string line;
    if (!std::getline(in, line))
        return {};
    json head;
    try {
        head = json::parse(line);
    } catch (const json::exception&) {
        throw CacheError("unreadable checkpoint header in " + path.string());
    }
    if (head != identity)
        throw CacheError("checkpoint " + path.string() + " belongs to a different run; remove it to start over");
    std::map<std::size_t, std::vector<FormClass>> done;
    while (std::getline(in, line)) {
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception&) {
            break;
        }
        std::vector<FormClass> cls;
        for (const auto& r : j.at("classes")) {
            FormClass c;
            c.rep = {r[0].get<std::int64_t>(), r[1].get<std::int64_t>(), r[2].get<std::int64_t>(),
                     r[3].get<std::int64_t>()};
            c.disc = r[4].get<std::int64_t>();
            c.stab_order = r[5].get<int>();
            c.maximal = r[6].get<int>() != 0;
            cls.push_back(c);
        }
        done[j.at("task").get<std::size_t>()] = std::move(cls);
    }
    return done;
}

// ---------------------------------------------------------------------------
// manifests: <artifact>.manifest.json

struct RunManifest {
    std::string subcommand;
    json flags = json::object(); // flags that determine the output
    json inputs = json::object(); // input path -> FNV-1a hash
    unsigned workers = 1;
    double wall_seconds = 0;
    json report = json::object();

    // the part that determines the artifact bytes
    json deterministic() const
    {
        return json{{"tool", "cubicshape"}, {"version", kToolVersion}, {"subcommand", subcommand},
                    {"flags", flags},       {"inputs", inputs}};
    }

    json full(const std::filesystem::path& artifact) const
    {
        json j = deterministic();
        j["artifact"] = artifact.filename().string();
        j["artifact_hash"] = fnv1a_file(artifact);
        j["workers"] = workers;
        j["wall_seconds"] = wall_seconds;
        if (!report.empty())
            j["report"] = report;
        return j;
    }
};

inline std::filesystem::path manifest_path(const std::filesystem::path& artifact)
{
    return artifact.string() + ".manifest.json";
}

inline void write_manifest(const std::filesystem::path& artifact, const RunManifest& m)
{
    AtomicWriter w(manifest_path(artifact));
    w.stream() << m.full(artifact).dump(2) << '\n';
    w.commit();
}

} // namespace cubicshape
