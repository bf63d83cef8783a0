#pragma once

#include <algorithm>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "fft.hpp"

namespace nsreg {

enum class FieldKind { velocity, pressure, vorticity, scalar };

inline std::string to_string(FieldKind k) {
    switch (k) {
    case FieldKind::velocity: return "velocity";
    case FieldKind::pressure: return "pressure";
    case FieldKind::vorticity: return "vorticity";
    case FieldKind::scalar: return "scalar";
    }
    return "scalar";
}

inline FieldKind field_kind_from_string(const std::string& s) {
    if (s == "velocity") return FieldKind::velocity;
    if (s == "pressure") return FieldKind::pressure;
    if (s == "vorticity") return FieldKind::vorticity;
    if (s == "scalar") return FieldKind::scalar;
    throw ValidationError("unknown field kind '" + s + "'");
}

/// Default component names per kind.
inline std::vector<std::string> default_names(FieldKind k, std::size_t count) {
    std::vector<std::string> out;
    const char* stem = k == FieldKind::velocity ? "u" : k == FieldKind::vorticity ? "w"
                     : k == FieldKind::pressure ? "pi" : "f";
    if (count == 1 && k == FieldKind::pressure) return {"pi"};
    for (std::size_t c = 0; c < count; ++c) out.push_back(stem + std::to_string(c + 1));
    return out;
}

/// One time level. Component lattices are shared and never mutated.
struct Snapshot {
    Grid3 grid;
    double time = 0.0;
    std::vector<std::shared_ptr<const Lattice>> components;

    std::size_t num_components() const { return components.size(); }
    const Lattice& component(std::size_t c) const { return *components.at(c); }
};

inline Snapshot make_snapshot(const Grid3& g, double t, std::vector<Lattice> comps) {
    Snapshot s{g, t, {}};
    for (auto& c : comps) {
        if (c.size() != g.size()) throw ValidationError("component lattice has wrong size");
        s.components.push_back(std::make_shared<const Lattice>(std::move(c)));
    }
    return s;
}

/// Time series of snapshots on a common grid with uniform spacing in time.
class SpaceTimeField {
public:
    SpaceTimeField() = default;

    SpaceTimeField(FieldKind kind, std::vector<std::string> names, std::vector<Snapshot> snaps,
                   double dt, std::string id = {})
        : kind_(kind), names_(std::move(names)), snaps_(std::move(snaps)), dt_(dt),
          id_(std::move(id)), cache_(std::make_shared<Cache>()) {
        if (snaps_.empty()) throw ValidationError("field has no snapshots");
        grid_ = snaps_.front().grid;
        grid_.validate();
        if (kind_ == FieldKind::velocity && names_.size() != 3)
            throw ValidationError("velocity field needs 3 components");
        if (kind_ == FieldKind::vorticity && names_.size() != 3)
            throw ValidationError("vorticity field needs 3 components");
        if (kind_ == FieldKind::pressure && names_.size() != 1)
            throw ValidationError("pressure field needs 1 component");
        for (std::size_t i = 0; i < snaps_.size(); ++i) {
            const auto& s = snaps_[i];
            if (!(s.grid == grid_)) throw ValidationError("snapshots on different grids");
            if (s.num_components() != names_.size())
                throw ValidationError("snapshot " + std::to_string(i) + " has wrong component count");
            for (const auto& c : s.components)
                if (!c || c->size() != grid_.size()) throw ValidationError("component lattice has wrong size");
        }
        if (snaps_.size() > 1) {
            if (!(dt_ > 0.0)) throw ValidationError("time step must be positive");
            for (std::size_t i = 1; i < snaps_.size(); ++i) {
                double step = snaps_[i].time - snaps_[i - 1].time;
                if (std::abs(step - dt_) > 1e-9 * dt_)
                    throw ValidationError("snapshot times are not uniformly spaced");
            }
        }
    }

    FieldKind kind() const { return kind_; }
    const std::vector<std::string>& names() const { return names_; }
    std::size_t num_components() const { return names_.size(); }
    std::size_t size() const { return snaps_.size(); }
    const Snapshot& operator[](std::size_t i) const { return snaps_.at(i); }
    const std::vector<Snapshot>& snapshots() const { return snaps_; }
    const Grid3& grid() const { return grid_; }
    double dt() const { return dt_; }
    const std::string& id() const { return id_; }
    double start_time() const { return snaps_.front().time; }
    double end_time() const { return snaps_.back().time; }
    std::vector<double> times() const {
        std::vector<double> t;
        for (const auto& s : snaps_) t.push_back(s.time);
        return t;
    }

    /// Index of the snapshot at time t, or -1.
    long find_time(double t) const {
        double tol = 1e-9 * std::max(dt_, 1e-300) + 1e-14 * std::abs(t);
        for (std::size_t i = 0; i < snaps_.size(); ++i)
            if (std::abs(snaps_[i].time - t) <= tol) return long(i);
        return -1;
    }

    /// Subset of components sharing storage and spectrum cache.
    SpaceTimeField select(const std::vector<std::size_t>& comps, FieldKind kind = FieldKind::scalar) const {
        std::vector<std::string> names;
        for (auto c : comps) names.push_back(names_.at(c));
        std::vector<Snapshot> snaps;
        for (const auto& s : snaps_) {
            Snapshot t{s.grid, s.time, {}};
            for (auto c : comps) t.components.push_back(s.components.at(c));
            snaps.push_back(std::move(t));
        }
        SpaceTimeField out(kind, std::move(names), std::move(snaps), dt_, id_);
        out.cache_ = cache_;
        return out;
    }

    /// Cached forward transform of one component lattice.
    std::shared_ptr<const Spectrum> spectrum(std::size_t snap, std::size_t comp) const {
        const auto& lat = snaps_.at(snap).components.at(comp);
        {
            std::lock_guard<std::mutex> lock(cache_->mutex);
            auto it = cache_->map.find(lat.get());
            if (it != cache_->map.end()) return it->second;
        }
        auto spec = std::make_shared<const Spectrum>(forward_fft(grid_, *lat));
        std::lock_guard<std::mutex> lock(cache_->mutex);
        cache_->map.emplace(lat.get(), spec);
        return spec;
    }

    /// Snapshots first..last (inclusive) sharing storage and spectrum cache.
    SpaceTimeField slice_time(std::size_t first, std::size_t last) const {
        if (first > last || last >= snaps_.size()) throw ValidationError("bad time slice");
        std::vector<Snapshot> snaps(snaps_.begin() + long(first), snaps_.begin() + long(last) + 1);
        SpaceTimeField out(kind_, names_, std::move(snaps), dt_, id_);
        out.cache_ = cache_;
        return out;
    }

    /// Stores a spectrum already known for a component (saves a transform).
    void seed_spectrum(std::size_t snap, std::size_t comp, Spectrum s) const {
        const auto& lat = snaps_.at(snap).components.at(comp);
        std::lock_guard<std::mutex> lock(cache_->mutex);
        cache_->map.emplace(lat.get(), std::make_shared<const Spectrum>(std::move(s)));
    }

private:
    struct Cache {
        std::mutex mutex;
        std::unordered_map<const Lattice*, std::shared_ptr<const Spectrum>> map;
    };

    FieldKind kind_ = FieldKind::scalar;
    std::vector<std::string> names_;
    std::vector<Snapshot> snaps_;
    Grid3 grid_{};
    double dt_ = 0.0;
    std::string id_;
    std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// A constant-in-time field replicated over [t_begin, t_end] at step dt, sharing storage.
inline SpaceTimeField steady_field(FieldKind kind, const Snapshot& s, double t_begin, double t_end,
                                   double dt, std::string id = {}) {
    if (!(dt > 0.0) || t_end < t_begin) throw ValidationError("bad steady time range");
    long steps = std::lround((t_end - t_begin) / dt);
    std::vector<Snapshot> snaps;
    for (long i = 0; i <= steps; ++i) {
        Snapshot t = s;
        t.time = t_begin + double(i) * dt;
        snaps.push_back(std::move(t));
    }
    return SpaceTimeField(kind, default_names(kind, s.num_components()), std::move(snaps), dt, std::move(id));
}

/// Maps every snapshot through fn(const Snapshot&) -> vector<Lattice>.
template <class Fn>
SpaceTimeField map_snapshots(const SpaceTimeField& f, FieldKind kind, std::vector<std::string> names, Fn&& fn) {
    std::vector<Snapshot> snaps;
    snaps.reserve(f.size());
    for (const auto& s : f.snapshots()) snaps.push_back(make_snapshot(s.grid, s.time, fn(s)));
    return SpaceTimeField(kind, std::move(names), std::move(snaps), f.dt(), f.id());
}

} // namespace nsreg
