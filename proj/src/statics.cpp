#include "tdcr/statics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tdcr {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

bool all_finite(const Vec3& v)
{
    return std::isfinite(v.x()) && std::isfinite(v.y()) && std::isfinite(v.z());
}

// Tendon hole positions on disks 0..end, in the global frame.
std::vector<Vec3> global_hole_positions(TendonId tendon, int end, const FrameChain& chain, const RobotParams& params)
{
    const Vec3 hole = tendon_anchor(0, tendon, params);
    std::vector<Vec3> out(static_cast<std::size_t>(end) + 1);
    for (int j = 0; j <= end; ++j)
        out[static_cast<std::size_t>(j)] = chain.global[static_cast<std::size_t>(j)].apply(hole);
    return out;
}

// Shared walk along a tendon route. With `propagate` set, chord tensions are
// rewritten from tensions[0] using the friction law; otherwise they are read as given.
std::vector<DiskWrench> walk_tendon(TendonId tendon, std::vector<double>& tensions, const FrameChain& chain,
                                    const RobotParams& params, bool propagate, double friction_scale,
                                    int* slack_from)
{
    const int end = tendon_route_end(tendon, params);
    if (end > chain.num_disks())
        throw std::invalid_argument("frame chain is shorter than the tendon route");
    if (static_cast<int>(tensions.size()) != end)
        throw std::invalid_argument("tension list length does not match the tendon route");

    const auto holes = global_hole_positions(tendon, end, chain, params);
    std::vector<DiskWrench> wrenches(static_cast<std::size_t>(end));

    for (int i = 1; i <= end; ++i)
    {
        const auto ui = static_cast<std::size_t>(i);
        const HomTransform& base = chain.global[ui - 1];
        const Mat3 to_local = base.rotation.transpose();

        const Vec3 to_prev = (holes[ui - 1] - holes[ui]).normalized();
        const double incoming = tensions[ui - 1];
        Vec3 pull = incoming * to_prev;

        if (i < end)
        {
            const Vec3 to_next = (holes[ui + 1] - holes[ui]).normalized();
            if (propagate)
            {
                // Contact force with the hole wall: the in-plane part of the resultant,
                // evaluated with the incoming tension on both chords.
                const Vec3 normal = chain.global[ui].rotation.col(2);
                const Vec3 trial = incoming * (to_prev + to_next);
                const Vec3 in_plane = trial - trial.dot(normal) * normal;
                const double sigma = std::acos(std::clamp(to_prev.dot(to_next), -1.0, 1.0));
                const double mu = friction_scale * friction_coefficient(sigma * kRadToDeg);
                double outgoing = incoming - mu * in_plane.norm();
                if (outgoing <= 0.0)
                {
                    outgoing = 0.0;
                    if (slack_from && *slack_from == 0 && incoming > 0.0)
                        *slack_from = i + 1;
                }
                tensions[ui] = outgoing;
            }
            pull += tensions[ui] * to_next;
        }

        DiskWrench& w = wrenches[ui - 1];
        w.force = to_local * pull;
        w.moment = to_local * (holes[ui] - base.translation).cross(pull);
        if (!all_finite(w.force) || !all_finite(w.moment))
            throw NonFiniteError("non-finite tendon wrench", i);
    }
    return wrenches;
}

}  // namespace

TendonForceSet TendonForceSet::zeros(const RobotParams& params)
{
    return uniform(params, 0.0);
}

TendonForceSet TendonForceSet::uniform(const RobotParams& params, double tension)
{
    return {std::vector<double>(static_cast<std::size_t>(params.num_tendons()), tension)};
}

void TendonForceSet::validate(const RobotParams& params) const
{
    if (static_cast<int>(base_tensions.size()) != params.num_tendons())
        throw std::invalid_argument("expected " + std::to_string(params.num_tendons()) + " tendon tensions, got " +
                                    std::to_string(base_tensions.size()));
    for (std::size_t t = 0; t < base_tensions.size(); ++t)
        if (!(base_tensions[t] >= 0.0) || !std::isfinite(base_tensions[t]))
            throw std::invalid_argument("tendon " + std::to_string(t + 1) + " tension must be finite and >= 0");
}

void LoadCase::validate() const
{
    if (!all_finite(external_force) || !all_finite(external_torque))
        throw std::invalid_argument("external load components must be finite");
}

double TensionProfile::max_abs_difference(const TensionProfile& other) const
{
    if (per_tendon.size() != other.per_tendon.size())
        throw std::invalid_argument("tension profiles cover different tendon sets");
    double out = 0.0;
    for (std::size_t t = 0; t < per_tendon.size(); ++t)
    {
        if (per_tendon[t].size() != other.per_tendon[t].size())
            throw std::invalid_argument("tension profiles have different routes");
        for (std::size_t i = 0; i < per_tendon[t].size(); ++i)
            out = std::max(out, std::abs(per_tendon[t][i] - other.per_tendon[t][i]));
    }
    return out;
}

DiskWrench gravity_wrench(int disk_index, const FrameChain& chain, const RobotParams& params, bool gravity_on)
{
    if (disk_index < 1 || disk_index > chain.num_disks())
        throw std::out_of_range("disk index " + std::to_string(disk_index) + " out of range");
    DiskWrench out;
    if (!gravity_on)
        return out;
    const auto i = static_cast<std::size_t>(disk_index);
    const Mat3 to_local = chain.global[i - 1].rotation.transpose();
    const Vec3 disk_force = to_local * Vec3(0.0, 0.0, -params.disk_mass * params.gravity_accel);
    const Vec3 backbone_force = to_local * Vec3(0.0, 0.0, -params.backbone_mass_per_subsegment * params.gravity_accel);
    out.force = disk_force + backbone_force;
    out.moment = chain.local[i].translation.cross(disk_force) + chain.backbone_midpoint[i].cross(backbone_force);
    return out;
}

DiskWrench external_tip_wrench(const FrameChain& chain, const LoadCase& load)
{
    const auto n = static_cast<std::size_t>(chain.num_disks());
    if (n == 0)
        return {};
    const Mat3 to_local = chain.global[n - 1].rotation.transpose();
    DiskWrench out;
    out.force = to_local * load.external_force;
    out.moment = chain.local[n].translation.cross(out.force) + to_local * load.external_torque;
    return out;
}

double local_bend_angle(int disk_index, TendonId tendon, const FrameChain& chain, const RobotParams& params)
{
    const int end = tendon_route_end(tendon, params);
    if (disk_index < 1 || disk_index >= end)
        throw std::out_of_range("disk " + std::to_string(disk_index) + " has no neighbour on both sides of tendon (" +
                                std::to_string(tendon.segment) + ", " + std::to_string(tendon.slot) + ")");
    const auto i = static_cast<std::size_t>(disk_index);
    const Vec3 hole = tendon_anchor(disk_index, tendon, params);
    // Expressed in frame i-1.
    const Vec3 prev = hole;
    const Vec3 here = chain.local[i].apply(hole);
    const Vec3 next = (chain.local[i] * chain.local[i + 1]).apply(hole);
    const Vec3 u_prev = (prev - here).normalized();
    const Vec3 u_next = (next - here).normalized();
    return std::acos(std::clamp(u_prev.dot(u_next) / (u_prev.norm() * u_next.norm()), -1.0, 1.0));
}

double friction_coefficient(double sigma_deg)
{
    return 0.689 * std::exp(-0.027 * sigma_deg);
}

TendonPropagation tendon_wrench_and_propagate(TendonId tendon, double base_tension, const FrameChain& chain,
                                              const RobotParams& params, double friction_scale)
{
    if (!(base_tension >= 0.0))
        throw std::invalid_argument("base tension must be >= 0");
    TendonPropagation out;
    out.tensions.assign(static_cast<std::size_t>(tendon_route_end(tendon, params)), 0.0);
    out.tensions[0] = base_tension;
    out.wrenches = walk_tendon(tendon, out.tensions, chain, params, true, friction_scale, &out.slack_from);
    return out;
}

std::vector<DiskWrench> tendon_wrenches(TendonId tendon, const std::vector<double>& tensions, const FrameChain& chain,
                                        const RobotParams& params)
{
    auto copy = tensions;
    return walk_tendon(tendon, copy, chain, params, false, 0.0, nullptr);
}

TensionProfile propagate_tensions(const TendonForceSet& forces, const FrameChain& chain, const RobotParams& params)
{
    forces.validate(params);
    TensionProfile out;
    out.per_tendon.reserve(forces.base_tensions.size());
    for (int t = 0; t < params.num_tendons(); ++t)
    {
        auto prop = tendon_wrench_and_propagate(tendon_from_index(t, params),
                                                forces.base_tensions[static_cast<std::size_t>(t)], chain, params);
        out.per_tendon.push_back(std::move(prop.tensions));
    }
    return out;
}

std::pair<Vec3, Vec3> elastic_moments(const SubsegmentState& state, const RobotParams& params)
{
    const double ei = params.bending_stiffness_coeff * params.backbone_young_modulus * params.backbone_second_moment;
    // E I k along the bending axis (-sin phi, cos phi, 0), written without phi.
    const Vec3 bending = ei * Vec3(-state.gamma, state.beta, 0.0);
    const double torque = 2.0 * params.backbone_shear_modulus * params.backbone_second_moment * state.twist /
                          params.subsegment_length;
    const Vec3 axis = subsegment_transform(state, params.subsegment_length).rotation.col(2);
    return {bending, torque * axis};
}

std::vector<DiskWrench> lumped_wrenches(const FrameChain& chain, const TensionProfile& tensions, const LoadCase& load,
                                        const RobotParams& params)
{
    const int n = chain.num_disks();
    if (static_cast<int>(tensions.per_tendon.size()) != params.num_tendons())
        throw std::invalid_argument("tension profile does not cover every tendon");

    std::vector<DiskWrench> applied(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i)
        applied[static_cast<std::size_t>(i - 1)] = gravity_wrench(i, chain, params, load.gravity_on);
    for (int t = 0; t < params.num_tendons(); ++t)
    {
        const auto wrenches = tendon_wrenches(tendon_from_index(t, params),
                                              tensions.per_tendon[static_cast<std::size_t>(t)], chain, params);
        for (std::size_t i = 0; i < wrenches.size(); ++i)
            applied[i] += wrenches[i];
    }
    if (n > 0)
        applied.back() += external_tip_wrench(chain, load);

    // Tip to base: carry the wrench about O_i in frame i over to O_{i-1} in frame i-1.
    std::vector<DiskWrench> lumped(static_cast<std::size_t>(n));
    DiskWrench carried;
    for (int i = n; i >= 1; --i)
    {
        const auto ui = static_cast<std::size_t>(i);
        DiskWrench here = applied[ui - 1];
        if (i < n)
        {
            const HomTransform& next = chain.local[ui];
            const Vec3 force = next.rotation * carried.force;
            here.force += force;
            here.moment += next.rotation * carried.moment + next.translation.cross(force);
        }
        if (!all_finite(here.force) || !all_finite(here.moment))
            throw NonFiniteError("non-finite lumped wrench", i);
        lumped[ui - 1] = here;
        carried = here;
    }
    return lumped;
}

Eigen::VectorXd equilibrium_residual(const Configuration& config, const TensionProfile& tensions,
                                     const LoadCase& load, const RobotParams& params)
{
    const FrameChain chain(config, params);
    const auto lumped = lumped_wrenches(chain, tensions, load, params);
    Eigen::VectorXd residual(3 * config.size());
    for (int i = 0; i < config.size(); ++i)
    {
        const auto [bending, torsion] = elastic_moments(config.states[static_cast<std::size_t>(i)], params);
        residual.segment<3>(3 * i) = lumped[static_cast<std::size_t>(i)].moment - bending - torsion;
    }
    return residual;
}

Eigen::VectorXd equilibrium_residual(const Configuration& config, const TendonForceSet& forces,
                                     const LoadCase& load, const RobotParams& params)
{
    const FrameChain chain(config, params);
    return equilibrium_residual(config, propagate_tensions(forces, chain, params), load, params);
}

}  // namespace tdcr
