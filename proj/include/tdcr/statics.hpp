#pragma once

#include "tdcr/geometry.hpp"

#include <stdexcept>
#include <utility>
#include <vector>

namespace tdcr {

// Base tensions F_{1,c} of every tendon, ordered segment-major (see tendon_index).
struct TendonForceSet
{
    std::vector<double> base_tensions;  // [N]

    static TendonForceSet zeros(const RobotParams& params);
    static TendonForceSet uniform(const RobotParams& params, double tension);
    void validate(const RobotParams& params) const;

    bool operator==(const TendonForceSet&) const = default;
};

struct LoadCase
{
    bool gravity_on = true;
    Vec3 external_force = Vec3::Zero();   // [N], global frame, applied at the tip disk center
    Vec3 external_torque = Vec3::Zero();  // [N m], global frame

    static LoadCase unloaded() { return {false, Vec3::Zero(), Vec3::Zero()}; }
    void validate() const;

    bool operator==(const LoadCase&) const = default;
};

// Chord tensions of every tendon: per_tendon[t][i-1] is the tension F_{i,c} on the
// chord between disk i-1 and disk i, for i = 1..route end.
struct TensionProfile
{
    std::vector<std::vector<double>> per_tendon;

    double max_abs_difference(const TensionProfile& other) const;
    bool operator==(const TensionProfile&) const = default;
};

// Force and moment about the proximal disk center O_{i-1}, in frame i-1.
struct DiskWrench
{
    Vec3 force = Vec3::Zero();
    Vec3 moment = Vec3::Zero();

    DiskWrench& operator+=(const DiskWrench& rhs)
    {
        force += rhs.force;
        moment += rhs.moment;
        return *this;
    }
};

// Thrown when an intermediate quantity of the equilibrium assembly is not finite.
class NonFiniteError : public std::runtime_error
{
public:
    NonFiniteError(const std::string& what, int disk) : std::runtime_error(what), disk_(disk) {}
    int disk() const { return disk_; }

private:
    int disk_;
};

// Weight of disk i and of the backbone piece between disks i-1 and i, with their
// moments about O_{i-1}. Zero when gravity is off.
DiskWrench gravity_wrench(int disk_index, const FrameChain& chain, const RobotParams& params, bool gravity_on = true);

// External tip force and torque, expressed in the frame of the second-to-last disk.
DiskWrench external_tip_wrench(const FrameChain& chain, const LoadCase& load);

// Angle between the chords leaving a tendon hole toward its two neighbours [rad].
// Throws std::out_of_range for the base plate and for the anchor disk.
double local_bend_angle(int disk_index, TendonId tendon, const FrameChain& chain, const RobotParams& params);

// Tendon/disk friction coefficient for a local bend angle in degrees.
double friction_coefficient(double sigma_deg);

struct TendonPropagation
{
    std::vector<DiskWrench> wrenches;  // wrenches[i-1] acts on disk i
    std::vector<double> tensions;      // chord tensions F_1..F_end
    int slack_from = 0;                // first chord carrying zero tension after clamping, 0 if none
};

// Runs a tendon from the base to its anchor: frictional tension loss at every routed
// disk and the resulting wrench on each disk.
// `friction_scale` multiplies every friction coefficient (0 gives a frictionless tendon).
TendonPropagation tendon_wrench_and_propagate(TendonId tendon, double base_tension, const FrameChain& chain,
                                              const RobotParams& params, double friction_scale = 1.0);

// Wrenches of a tendon whose chord tensions are already known.
std::vector<DiskWrench> tendon_wrenches(TendonId tendon, const std::vector<double>& tensions, const FrameChain& chain,
                                        const RobotParams& params);

TensionProfile propagate_tensions(const TendonForceSet& forces, const FrameChain& chain, const RobotParams& params);

// Restoring bending and torsion moments of a subsegment, in its base frame.
std::pair<Vec3, Vec3> elastic_moments(const SubsegmentState& state, const RobotParams& params);

// Moment balance of every subsegment, three entries per subsegment:
// (lumped load moment about O_{i-1}) - (elastic moment), in frame i-1.
// This overload holds the tendon tensions fixed.
Eigen::VectorXd equilibrium_residual(const Configuration& config, const TensionProfile& tensions,
                                     const LoadCase& load, const RobotParams& params);

// Recomputes the friction-reduced tensions on `config` first.
Eigen::VectorXd equilibrium_residual(const Configuration& config, const TendonForceSet& forces,
                                     const LoadCase& load, const RobotParams& params);

// Lumped wrench transmitted through every disk center, accumulated tip to base.
// result[i-1] is the wrench about O_{i-1} in frame i-1 carried by subsegment i.
std::vector<DiskWrench> lumped_wrenches(const FrameChain& chain, const TensionProfile& tensions, const LoadCase& load,
                                        const RobotParams& params);

}  // namespace tdcr
