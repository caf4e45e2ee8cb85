#pragma once

#include <string>
#include <vector>

#include "mkdv/common.hpp"
#include "mkdv/potential.hpp"

namespace mkdv {

enum class TimeScheme { RK4, IMEX };

std::string to_string(TimeScheme s);
TimeScheme scheme_from_string(const std::string& s);

struct SimConfig {
    double L = 64.0;
    int N = 1281;
    double dt = 0.002;
    double t_end = 1.0;
    TimeScheme scheme = TimeScheme::IMEX;
    std::vector<double> snapshot_times;
    double stability_factor = 0.3;
    /// Leftmost and rightmost initial core positions; used to check boundary clearance.
    double core_left = 0.0;
    double core_right = 0.0;
    double max_speed = 6.0;
    double clearance = 10.0;

    double dx() const { return 2.0 * L / (N - 1); }
    std::vector<double> grid() const;
    void validate() const;
};

struct SnapshotDiagnostics {
    double residual_norm = 0.0;
    double boundary_drift = 0.0;
    /// Largest |q − boundary value| over the ten nodes next to each end.
    double edge_deviation = 0.0;
    double mass_like = 0.0;
};

struct FieldSnapshot {
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> q;
    SnapshotDiagnostics diagnostics;
};

/// Thrown when the field stops being finite; carries the snapshots completed so far.
class SimulationAborted : public NumericalError {
public:
    SimulationAborted(const std::string& what, std::vector<FieldSnapshot> good)
        : NumericalError(what), last_good(std::move(good)) {}
    std::vector<FieldSnapshot> last_good;
};

std::vector<FieldSnapshot> evolve(const PotentialSample& q0, const SimConfig& cfg);

/// Sixth-order central differences with the boundary values continued as constants.
void derivative1(const std::vector<double>& q, double dx, double left, double right, std::vector<double>& out);
void derivative3(const std::vector<double>& q, double dx, double left, double right, std::vector<double>& out);

double pde_residual(const FieldSnapshot& a, const FieldSnapshot& b, const FieldSnapshot& c);

struct TrackPoint {
    double t = 0.0;
    double position = 0.0;
    double value = 0.0;
};

struct Track {
    std::string kind;
    std::vector<TrackPoint> points;

    double fitted_velocity() const;
    /// Intercept of the least-squares line position = v t + b.
    double fitted_offset() const;
};

struct TrackOptions {
    double threshold = 1e-2;
    bool include_front = true;
};

std::vector<Track> extract_soliton_tracks(const std::vector<FieldSnapshot>& snaps,
                                          const TrackOptions& opt = {});

double window_linf(const std::vector<double>& x, const std::vector<double>& a,
                   const std::vector<double>& b, double lo, double hi);
double window_l2(const std::vector<double>& x, const std::vector<double>& a,
                 const std::vector<double>& b, double lo, double hi);

}  // namespace mkdv
