#pragma once

#include <Eigen/Dense>

#include <numbers>
#include <utility>
#include <vector>

namespace tdcr {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Geometry, material and mass constants of a multi-segment tendon-driven
// continuum robot. Defaults describe the two-segment, eight-tendon robot
// used throughout the project (see configs/ for the labeled values).
struct RobotParams
{
    int num_segments = 2;
    int disks_per_segment = 10;
    double subsegment_length = 0.02;       // [m]
    double tendon_pitch_radius = 0.006;    // [m]
    int tendons_per_segment = 4;
    double backbone_young_modulus = 60e9;  // [Pa]
    double backbone_shear_modulus = 23e9;  // [Pa]
    double backbone_second_moment = std::numbers::pi * 0.002 * 0.002 * 0.002 * 0.002 / 64.0;  // [m^4], 2 mm rod
    double bending_stiffness_coeff = 1.0;
    double disk_mass = 0.002;                     // [kg]
    double backbone_mass_per_subsegment = 0.0003; // [kg]
    double gravity_accel = 9.81;                  // [m/s^2], along global -z

    int num_subsegments() const { return num_segments * disks_per_segment; }
    int num_tendons() const { return num_segments * tendons_per_segment; }
    double total_length() const { return num_subsegments() * subsegment_length; }

    // Throws std::invalid_argument naming the first offending field.
    void validate() const;

    bool operator==(const RobotParams&) const = default;
};

// Curvatures about the local x/y directions and twist of one subsegment.
struct SubsegmentState
{
    double beta = 0.0;   // [1/m]
    double gamma = 0.0;  // [1/m]
    double twist = 0.0;  // [rad]

    bool operator==(const SubsegmentState&) const = default;
};

// Finite and not folded past a half circle.
bool is_admissible(const SubsegmentState& state, double length);

struct Configuration
{
    std::vector<SubsegmentState> states;  // base -> tip

    static Configuration straight(int num_subsegments);
    static Configuration from_vector(const Eigen::VectorXd& unknowns);
    Eigen::VectorXd to_vector() const;
    int size() const { return static_cast<int>(states.size()); }

    bool operator==(const Configuration&) const = default;
};

struct HomTransform
{
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    static HomTransform identity() { return {}; }

    HomTransform operator*(const HomTransform& rhs) const
    {
        return {rotation * rhs.rotation, rotation * rhs.translation + translation};
    }
    Vec3 apply(const Vec3& point) const { return rotation * point + translation; }
    HomTransform inverse() const
    {
        const Mat3 rt = rotation.transpose();
        return {rt, -rt * translation};
    }
    Eigen::Matrix4d matrix() const;
};

Mat3 rot_x(double angle);
Mat3 rot_y(double angle);
Mat3 rot_z(double angle);

// k = sqrt(beta^2 + gamma^2), phi = atan2(gamma, beta); phi = 0 for a straight subsegment.
std::pair<double, double> curvature_polar(const SubsegmentState& state);

// Point of the constant-curvature arc at arc length s, in the subsegment's base frame.
Vec3 arc_point(const SubsegmentState& state, double s);

// Transform from the subsegment's base frame (disk i-1) to its end frame (disk i):
// bend Rz(phi) Ry(k l) Rz(-phi) followed by the twist Rz(twist).
HomTransform subsegment_transform(const SubsegmentState& state, double length);

// Cumulative base-to-disk transforms ^0T_i for i = 1..n.
std::vector<HomTransform> chain_transforms(const Configuration& config, const RobotParams& params);

double tip_norm(const Configuration& config, const RobotParams& params);

// Segment and slot, both 1-based.
struct TendonId
{
    int segment = 1;
    int slot = 1;

    bool operator==(const TendonId&) const = default;
};

// Flat index of a tendon: segment-major, slot-minor (0-based).
int tendon_index(TendonId tendon, const RobotParams& params);
TendonId tendon_from_index(int index, const RobotParams& params);

// Last disk the tendon passes through; it is anchored there.
int tendon_route_end(TendonId tendon, const RobotParams& params);

// Angular position of the tendon hole on its disks.
double tendon_hole_angle(TendonId tendon, const RobotParams& params);

// Hole position in the local frame of disk `disk_index` (0 = base plate).
// Throws std::out_of_range if the disk is not on the tendon's route.
Vec3 tendon_anchor(int disk_index, TendonId tendon, const RobotParams& params);

// Local and cumulative transforms of a configuration, shared by all statics routines.
// local[i] = ^{i-1}T_i and global[i] = ^0T_i for i = 1..n; index 0 holds the identity.
struct FrameChain
{
    std::vector<HomTransform> local;
    std::vector<HomTransform> global;
    std::vector<Vec3> backbone_midpoint;  // arc midpoint of subsegment i in frame i-1

    FrameChain(const Configuration& config, const RobotParams& params);
    int num_disks() const { return static_cast<int>(local.size()) - 1; }
    const HomTransform& tip() const { return global.back(); }
};

}  // namespace tdcr
