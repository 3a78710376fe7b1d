#include "tdcr/geometry.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace tdcr {

namespace {

// Below this bend angle the trigonometric ratios switch to their Taylor series.
constexpr double kSeriesThreshold = 1e-6;

// sin(t)/t
double sinc(double t)
{
    if (std::abs(t) < kSeriesThreshold)
        return 1.0 - t * t / 6.0;
    return std::sin(t) / t;
}

// (1 - cos(t))/t^2
double versinc(double t)
{
    if (std::abs(t) < kSeriesThreshold)
        return 0.5 - t * t / 24.0;
    const double h = std::sin(0.5 * t) / (0.5 * t);
    return 0.5 * h * h;
}

Mat3 skew(const Vec3& w)
{
    Mat3 m;
    m << 0.0, -w.z(), w.y(),
         w.z(), 0.0, -w.x(),
         -w.y(), w.x(), 0.0;
    return m;
}

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
        throw std::invalid_argument(std::string("robot parameter '") + name + "' must be positive and finite");
}

void require_count(int value, const char* name)
{
    if (value < 1)
        throw std::invalid_argument(std::string("robot parameter '") + name + "' must be >= 1");
}

}  // namespace

void RobotParams::validate() const
{
    require_count(num_segments, "num_segments");
    require_count(disks_per_segment, "disks_per_segment");
    require_count(tendons_per_segment, "tendons_per_segment");
    require_positive(subsegment_length, "subsegment_length");
    require_positive(tendon_pitch_radius, "tendon_pitch_radius");
    require_positive(backbone_young_modulus, "backbone_young_modulus");
    require_positive(backbone_shear_modulus, "backbone_shear_modulus");
    require_positive(backbone_second_moment, "backbone_second_moment");
    require_positive(bending_stiffness_coeff, "bending_stiffness_coeff");
    require_positive(disk_mass, "disk_mass");
    require_positive(backbone_mass_per_subsegment, "backbone_mass_per_subsegment");
    require_positive(gravity_accel, "gravity_accel");
}

bool is_admissible(const SubsegmentState& state, double length)
{
    if (!std::isfinite(state.beta) || !std::isfinite(state.gamma) || !std::isfinite(state.twist))
        return false;
    return std::abs(state.beta * length) < std::numbers::pi && std::abs(state.gamma * length) < std::numbers::pi;
}

Configuration Configuration::straight(int num_subsegments)
{
    return Configuration{std::vector<SubsegmentState>(static_cast<std::size_t>(num_subsegments))};
}

Configuration Configuration::from_vector(const Eigen::VectorXd& unknowns)
{
    if (unknowns.size() % 3 != 0)
        throw std::invalid_argument("configuration vector length must be a multiple of 3");
    Configuration config;
    config.states.resize(static_cast<std::size_t>(unknowns.size() / 3));
    for (std::size_t i = 0; i < config.states.size(); ++i)
    {
        const auto j = static_cast<Eigen::Index>(3 * i);
        config.states[i] = {unknowns[j], unknowns[j + 1], unknowns[j + 2]};
    }
    return config;
}

Eigen::VectorXd Configuration::to_vector() const
{
    Eigen::VectorXd out(3 * static_cast<Eigen::Index>(states.size()));
    for (std::size_t i = 0; i < states.size(); ++i)
    {
        const auto j = static_cast<Eigen::Index>(3 * i);
        out[j] = states[i].beta;
        out[j + 1] = states[i].gamma;
        out[j + 2] = states[i].twist;
    }
    return out;
}

Eigen::Matrix4d HomTransform::matrix() const
{
    Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
    m.topLeftCorner<3, 3>() = rotation;
    m.topRightCorner<3, 1>() = translation;
    return m;
}

Mat3 rot_x(double angle)
{
    return Eigen::AngleAxisd(angle, Vec3::UnitX()).toRotationMatrix();
}

Mat3 rot_y(double angle)
{
    return Eigen::AngleAxisd(angle, Vec3::UnitY()).toRotationMatrix();
}

Mat3 rot_z(double angle)
{
    return Eigen::AngleAxisd(angle, Vec3::UnitZ()).toRotationMatrix();
}

std::pair<double, double> curvature_polar(const SubsegmentState& state)
{
    const double k = std::hypot(state.beta, state.gamma);
    if (k == 0.0)
        return {0.0, 0.0};
    return {k, std::atan2(state.gamma, state.beta)};
}

// Written in terms of beta and gamma directly: x = beta l^2 (1-cos t)/t^2 is the
// arc formula r cos(phi)(1 - cos t) with r = 1/k, and stays smooth through k = 0.
Vec3 arc_point(const SubsegmentState& state, double s)
{
    const double t = std::hypot(state.beta, state.gamma) * s;
    const double v = versinc(t) * s * s;
    return {state.beta * v, state.gamma * v, s * sinc(t)};
}

HomTransform subsegment_transform(const SubsegmentState& state, double length)
{
    // Rz(phi) Ry(t) Rz(-phi) is the rotation by t about (-sin phi, cos phi, 0).
    const Vec3 omega = length * Vec3(-state.gamma, state.beta, 0.0);
    const double t = omega.norm();
    const Mat3 w = skew(omega);
    Mat3 bend = Mat3::Identity() + sinc(t) * w + versinc(t) * w * w;

    HomTransform out;
    out.rotation = state.twist == 0.0 ? bend : Mat3(bend * rot_z(state.twist));
    out.translation = arc_point(state, length);
    return out;
}

std::vector<HomTransform> chain_transforms(const Configuration& config, const RobotParams& params)
{
    if (config.size() != params.num_subsegments())
        throw std::invalid_argument("configuration has " + std::to_string(config.size()) +
                                    " subsegments, robot has " + std::to_string(params.num_subsegments()));
    std::vector<HomTransform> out;
    out.reserve(config.states.size());
    HomTransform acc;
    for (const auto& state : config.states)
    {
        acc = acc * subsegment_transform(state, params.subsegment_length);
        out.push_back(acc);
    }
    return out;
}

double tip_norm(const Configuration& config, const RobotParams& params)
{
    const auto chain = chain_transforms(config, params);
    return chain.empty() ? 0.0 : chain.back().translation.norm();
}

int tendon_index(TendonId tendon, const RobotParams& params)
{
    if (tendon.segment < 1 || tendon.segment > params.num_segments || tendon.slot < 1 ||
        tendon.slot > params.tendons_per_segment)
        throw std::out_of_range("tendon (" + std::to_string(tendon.segment) + ", " + std::to_string(tendon.slot) +
                                ") does not exist");
    return (tendon.segment - 1) * params.tendons_per_segment + (tendon.slot - 1);
}

TendonId tendon_from_index(int index, const RobotParams& params)
{
    if (index < 0 || index >= params.num_tendons())
        throw std::out_of_range("tendon index " + std::to_string(index) + " out of range");
    return {index / params.tendons_per_segment + 1, index % params.tendons_per_segment + 1};
}

int tendon_route_end(TendonId tendon, const RobotParams& params)
{
    tendon_index(tendon, params);
    return tendon.segment * params.disks_per_segment;
}

double tendon_hole_angle(TendonId tendon, const RobotParams& params)
{
    const double spacing = 2.0 * std::numbers::pi / params.tendons_per_segment;
    // Each further segment is offset by an equal share of the slot spacing (45 deg for 2 x 4 tendons).
    return spacing * (tendon.slot - 1) + (tendon.segment - 1) * spacing / params.num_segments;
}

Vec3 tendon_anchor(int disk_index, TendonId tendon, const RobotParams& params)
{
    const int end = tendon_route_end(tendon, params);
    if (disk_index < 0 || disk_index > end)
        throw std::out_of_range("disk " + std::to_string(disk_index) + " is not on the route of tendon (" +
                                std::to_string(tendon.segment) + ", " + std::to_string(tendon.slot) + ")");
    const double angle = tendon_hole_angle(tendon, params);
    return {params.tendon_pitch_radius * std::cos(angle), params.tendon_pitch_radius * std::sin(angle), 0.0};
}

FrameChain::FrameChain(const Configuration& config, const RobotParams& params)
{
    if (config.size() != params.num_subsegments())
        throw std::invalid_argument("configuration has " + std::to_string(config.size()) +
                                    " subsegments, robot has " + std::to_string(params.num_subsegments()));
    const auto n = config.states.size();
    local.resize(n + 1);
    global.resize(n + 1);
    backbone_midpoint.assign(n + 1, Vec3::Zero());
    for (std::size_t i = 1; i <= n; ++i)
    {
        local[i] = subsegment_transform(config.states[i - 1], params.subsegment_length);
        global[i] = global[i - 1] * local[i];
        backbone_midpoint[i] = arc_point(config.states[i - 1], 0.5 * params.subsegment_length);
    }
}

}  // namespace tdcr
