#pragma once

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "field.hpp"

namespace nsreg {

namespace detail {

inline std::string payload_name(const std::string& comp, std::size_t snap) {
    char buf[32];
    std::snprintf(buf, sizeof buf, ".%05zu.bin", snap);
    return comp + buf;
}

} // namespace detail

/// Writes manifest.json plus one raw little-endian float64 file per component per snapshot.
inline void persist_field(const SpaceTimeField& f, const std::filesystem::path& dir) {
    static_assert(std::endian::native == std::endian::little, "big-endian hosts are not supported");
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
    nlohmann::ordered_json m;
    m["format"] = "nsreg-field";
    m["version"] = 1;
    m["n"] = f.grid().n;
    m["box_length"] = f.grid().box_length;
    m["dt"] = f.dt();
    m["times"] = f.times();
    m["kind"] = to_string(f.kind());
    m["components"] = f.names();
    m["endianness"] = "little";
    m["id"] = f.id();
    {
        std::ofstream out(dir / "manifest.json");
        if (!out) throw IoError("cannot write manifest in " + dir.string());
        out << m.dump(2) << "\n";
    }
    for (std::size_t i = 0; i < f.size(); ++i)
        for (std::size_t c = 0; c < f.num_components(); ++c) {
            const auto& l = f[i].component(c);
            std::ofstream out(dir / detail::payload_name(f.names()[c], i), std::ios::binary);
            out.write(reinterpret_cast<const char*>(l.data()), std::streamsize(l.size() * sizeof(double)));
            if (!out) throw IoError("failed writing component " + f.names()[c]);
        }
}

inline SpaceTimeField load_field(const std::filesystem::path& dir) {
    std::ifstream in(dir / "manifest.json");
    if (!in) throw IoError("missing manifest in " + dir.string());
    nlohmann::json m;
    try {
        in >> m;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("corrupt manifest: ") + e.what());
    }
    Grid3 g;
    double dt;
    std::vector<double> times;
    std::vector<std::string> names;
    FieldKind kind;
    std::string id;
    try {
        g.n = m.at("n").get<int>();
        g.box_length = m.at("box_length").get<double>();
        dt = m.at("dt").get<double>();
        times = m.at("times").get<std::vector<double>>();
        names = m.at("components").get<std::vector<std::string>>();
        kind = field_kind_from_string(m.at("kind").get<std::string>());
        if (m.contains("endianness") && m["endianness"].get<std::string>() != "little")
            throw ValidationError("unsupported endianness '" + m["endianness"].get<std::string>() + "'");
        if (m.contains("id")) id = m["id"].get<std::string>();
    } catch (const ValidationError&) {
        throw;
    } catch (const std::exception& e) {
        throw ValidationError(std::string("corrupt manifest: ") + e.what());
    }
    g.validate();
    if (times.empty() || names.empty()) throw ValidationError("corrupt manifest: empty times or components");
    std::vector<Snapshot> snaps;
    const std::size_t bytes = g.size() * sizeof(double);
    for (std::size_t i = 0; i < times.size(); ++i) {
        std::vector<Lattice> comps;
        for (const auto& name : names) {
            auto path = dir / detail::payload_name(name, i);
            std::ifstream b(path, std::ios::binary);
            if (!b) throw IoError("missing payload for component " + name + " (" + path.filename().string() + ")");
            Lattice l(g.size());
            b.read(reinterpret_cast<char*>(l.data()), std::streamsize(bytes));
            if (std::size_t(b.gcount()) != bytes)
                throw ValidationError("payload for component " + name + " snapshot " + std::to_string(i) +
                                      " is short: " + std::to_string(b.gcount()) + " of " + std::to_string(bytes) +
                                      " bytes");
            char extra;
            if (b.read(&extra, 1); b.gcount() != 0)
                throw ValidationError("payload for component " + name + " snapshot " + std::to_string(i) +
                                      " is longer than the grid");
            comps.push_back(std::move(l));
        }
        snaps.push_back(make_snapshot(g, times[i], std::move(comps)));
    }
    return SpaceTimeField(kind, names, std::move(snaps), dt, id);
}

} // namespace nsreg
