#include "tdcr/statics.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace tdcr;

namespace {

constexpr double kPi = std::numbers::pi;

Configuration planar(double theta_per_subsegment, const RobotParams& p)
{
    Configuration c = Configuration::straight(p.num_subsegments());
    for (auto& s : c.states)
        s.beta = theta_per_subsegment / p.subsegment_length;
    return c;
}

Configuration random_config(std::mt19937_64& rng, double kmax, double emax)
{
    std::uniform_real_distribution<double> k(-kmax, kmax), e(-emax, emax);
    Configuration c = Configuration::straight(20);
    for (auto& s : c.states)
        s = {k(rng), k(rng), e(rng)};
    return c;
}

TendonForceSet random_forces(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> f(0.0, 10.0);
    TendonForceSet out;
    for (int t = 0; t < 8; ++t)
        out.base_tensions.push_back(f(rng));
    return out;
}

const LoadCase kReferenceLoad{true, Vec3(0.1, 0.1, -0.1), Vec3(-0.1, 0.1, 0.1)};

}  // namespace

TEST(Gravity, OffIsZero)
{
    RobotParams p;
    const FrameChain chain(planar(0.1, p), p);
    const auto w = gravity_wrench(5, chain, p, false);
    EXPECT_EQ(w.force, Vec3::Zero());
    EXPECT_EQ(w.moment, Vec3::Zero());
    p.gravity_accel = 0.0;
    EXPECT_EQ(gravity_wrench(5, chain, p).force, Vec3::Zero());
}

TEST(Gravity, StraightRobotDiskWeight)
{
    RobotParams p;
    p.backbone_mass_per_subsegment = 0.0;
    const FrameChain chain(Configuration::straight(20), p);
    const auto w = gravity_wrench(4, chain, p);
    EXPECT_NEAR((w.force - Vec3(0, 0, -0.01962)).norm(), 0.0, 1e-15);
    // Weight along the backbone axis has no moment about the disk below.
    EXPECT_LT(w.moment.norm(), 1e-18);
}

TEST(Gravity, IncludesBackbonePiece)
{
    RobotParams p;
    const FrameChain chain(Configuration::straight(20), p);
    EXPECT_NEAR(gravity_wrench(1, chain, p).force.z(), -(0.002 + 0.0003) * 9.81, 1e-16);
}

TEST(Gravity, QuarterBendRotatesWeightIntoLocalX)
{
    RobotParams p;
    p.backbone_mass_per_subsegment = 0.0;
    Configuration c = Configuration::straight(20);
    c.states[0].beta = kPi / 2 / p.subsegment_length;
    const FrameChain chain(c, p);
    const Vec3 f = gravity_wrench(2, chain, p).force;  // expressed in frame 1 = R_y(pi/2)
    EXPECT_NEAR(std::abs(f.x()), 0.002 * 9.81, 1e-15);
    EXPECT_NEAR(f.z(), 0.0, 1e-15);
}

TEST(ExternalLoad, ZeroLoadZeroWrench)
{
    RobotParams p;
    const FrameChain chain(planar(0.1, p), p);
    const auto w = external_tip_wrench(chain, LoadCase::unloaded());
    EXPECT_EQ(w.force, Vec3::Zero());
    EXPECT_EQ(w.moment, Vec3::Zero());
}

TEST(ExternalLoad, StraightRobotSeesGlobalValues)
{
    RobotParams p;
    const FrameChain chain(Configuration::straight(20), p);
    const auto w = external_tip_wrench(chain, {false, Vec3(0.1, 0.1, -0.1), Vec3::Zero()});
    EXPECT_LT((w.force - Vec3(0.1, 0.1, -0.1)).norm(), 1e-16);
    const auto t = external_tip_wrench(chain, {false, Vec3::Zero(), Vec3(-0.1, 0.1, 0.1)});
    EXPECT_EQ(t.force, Vec3::Zero());
    EXPECT_LT((t.moment - Vec3(-0.1, 0.1, 0.1)).norm(), 1e-16);
}

TEST(ExternalLoad, ValidateRejectsNonFinite)
{
    EXPECT_THROW((LoadCase{false, Vec3(NAN, 0, 0), Vec3::Zero()}.validate()), std::invalid_argument);
    EXPECT_NO_THROW(kReferenceLoad.validate());
}

TEST(BendAngle, StraightTendonIsAntiparallel)
{
    RobotParams p;
    const FrameChain chain(Configuration::straight(20), p);
    for (int i = 1; i < 10; ++i)
        EXPECT_NEAR(local_bend_angle(i, {1, 1}, chain, p), kPi, 1e-7);
}

TEST(BendAngle, PlanarBendChordGeometry)
{
    RobotParams p;
    const FrameChain chain(planar(0.2, p), p);
    // Every slot, including the ones on the neutral axis, turns by the arc angle per chord.
    for (int slot = 1; slot <= 4; ++slot)
        for (int i = 1; i < 20; ++i)
            EXPECT_NEAR(local_bend_angle(i, {2, slot}, chain, p), kPi - 0.2, 1e-12);
}

TEST(BendAngle, OffRouteThrows)
{
    RobotParams p;
    const FrameChain chain(Configuration::straight(20), p);
    EXPECT_THROW(local_bend_angle(0, {1, 1}, chain, p), std::out_of_range);
    EXPECT_THROW(local_bend_angle(10, {1, 1}, chain, p), std::out_of_range);
    EXPECT_NO_THROW(local_bend_angle(10, {2, 1}, chain, p));
}

TEST(Friction, Coefficients)
{
    EXPECT_EQ(friction_coefficient(0.0), 0.689);
    EXPECT_NEAR(friction_coefficient(180.0), 0.00534008340099318, 1e-15);
    EXPECT_NEAR(friction_coefficient(10.0), 0.5259684715980918, 1e-15);
}

TEST(Friction, BoundedAndDecreasing)
{
    double previous = friction_coefficient(0.0);
    for (double s = 0.5; s <= 180.0; s += 0.5)
    {
        const double mu = friction_coefficient(s);
        EXPECT_GT(mu, 0.0);
        EXPECT_LE(mu, 0.689);
        EXPECT_LT(mu, previous);
        previous = mu;
    }
}

TEST(Tension, FrictionlessIsConstant)
{
    RobotParams p;
    const FrameChain chain(planar(0.2, p), p);
    const auto prop = tendon_wrench_and_propagate({2, 1}, 3.0, chain, p, 0.0);
    ASSERT_EQ(prop.tensions.size(), 20u);
    for (double f : prop.tensions)
        EXPECT_EQ(f, 3.0);
}

TEST(Tension, StraightTendonLosesNothing)
{
    RobotParams p;
    const FrameChain chain(Configuration::straight(20), p);
    const auto prop = tendon_wrench_and_propagate({1, 1}, 1.0, chain, p);
    ASSERT_EQ(prop.tensions.size(), 10u);
    for (double f : prop.tensions)
        EXPECT_NEAR(f, 1.0, 1e-15);
    for (int i = 1; i < 10; ++i)
        EXPECT_LT(prop.wrenches[i - 1].force.norm(), 1e-15) << i;
    EXPECT_LT((prop.wrenches[9].force - Vec3(0, 0, -1)).norm(), 1e-15);
    EXPECT_EQ(prop.slack_from, 0);
}

TEST(Tension, UniformBendCascadeOracle)
{
    // Independent arithmetic: each interior disk multiplies the tension by
    // 1 - 2 mu sin(theta / 2), mu at sigma = pi - theta.
    RobotParams p;
    const FrameChain chain(planar(0.2, p), p);
    const auto prop = tendon_wrench_and_propagate({1, 1}, 1.0, chain, p);
    const double q = 0.9985471409911357;
    for (int i = 0; i < 10; ++i)
        EXPECT_NEAR(prop.tensions[i], std::pow(q, i), 1e-14) << i;
    EXPECT_NEAR(prop.tensions[9], 0.987000000653306, 1e-14);
}

TEST(Tension, NonIncreasingOnRandomConfigs)
{
    RobotParams p;
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial)
    {
        const FrameChain chain(random_config(rng, 100.0, 0.3), p);
        const auto prof = propagate_tensions(random_forces(rng), chain, p);
        for (const auto& tendon : prof.per_tendon)
            for (std::size_t i = 0; i < tendon.size(); ++i)
            {
                EXPECT_GE(tendon[i], 0.0);
                if (i > 0)
                    EXPECT_LE(tendon[i], tendon[i - 1]);
            }
    }
}

TEST(Tension, FrozenWrenchesMatchPropagation)
{
    RobotParams p;
    std::mt19937_64 rng(8);
    const FrameChain chain(random_config(rng, 40.0, 0.1), p);
    const auto prop = tendon_wrench_and_propagate({2, 3}, 6.5, chain, p);
    const auto frozen = tendon_wrenches({2, 3}, prop.tensions, chain, p);
    ASSERT_EQ(frozen.size(), prop.wrenches.size());
    for (std::size_t i = 0; i < frozen.size(); ++i)
    {
        EXPECT_EQ(frozen[i].force, prop.wrenches[i].force);
        EXPECT_EQ(frozen[i].moment, prop.wrenches[i].moment);
    }
}

TEST(Tension, ForceSetValidation)
{
    RobotParams p;
    EXPECT_THROW((TendonForceSet{{1.0, 2.0}}.validate(p)), std::invalid_argument);
    auto f = TendonForceSet::uniform(p, 1.0);
    f.base_tensions[3] = -0.1;
    EXPECT_THROW(f.validate(p), std::invalid_argument);
    EXPECT_NO_THROW(TendonForceSet::zeros(p).validate(p));
}

TEST(Elastic, StraightIsZero)
{
    auto [bend, tors] = elastic_moments({}, RobotParams{});
    EXPECT_EQ(bend, Vec3::Zero());
    EXPECT_EQ(tors, Vec3::Zero());
}

TEST(Elastic, Magnitudes)
{
    RobotParams p;
    p.backbone_second_moment = 4.909e-14;
    EXPECT_NEAR(elastic_moments({0, 0, 0.01}, p).second.norm(), 1.129070e-3, 1e-9);
    EXPECT_NEAR(elastic_moments({6, 8, 0}, p).first.norm(), 2.9454e-2, 1e-9);
    // Bending axis is perpendicular to the curvature direction in the disk plane.
    const Vec3 axis = elastic_moments({6, 8, 0}, p).first.normalized();
    EXPECT_NEAR(axis.dot(Vec3(6, 8, 0)), 0.0, 1e-15);
    EXPECT_EQ(axis.z(), 0.0);
}

TEST(Residual, ZeroLoadStraightIsExactlyZero)
{
    RobotParams p;
    const auto r = equilibrium_residual(Configuration::straight(20), TendonForceSet::zeros(p), LoadCase::unloaded(), p);
    ASSERT_EQ(r.size(), 60);
    EXPECT_EQ(r.norm(), 0.0);
}

TEST(Residual, EqualTensionsCancelLaterally)
{
    RobotParams p;
    const auto r = equilibrium_residual(Configuration::straight(20), TendonForceSet::uniform(p, 4.0),
                                        LoadCase::unloaded(), p);
    EXPECT_LT(r.norm(), 1e-12);
}

TEST(Residual, SingleTendonBendsTowardItself)
{
    RobotParams p;
    auto f = TendonForceSet::zeros(p);
    f.base_tensions[0] = 2.0;
    const auto r = equilibrium_residual(Configuration::straight(20), f, LoadCase::unloaded(), p);
    // Tendon at +x pulls the tip toward +x: positive moment about local y on every loaded subsegment.
    for (int i = 0; i < 10; ++i)
    {
        EXPECT_NEAR(r[3 * i + 1], 2.0 * 0.006, 1e-14) << i;
        EXPECT_NEAR(r[3 * i], 0.0, 1e-15);
    }
    for (int i = 10; i < 20; ++i)
        EXPECT_LT(r.segment(3 * i, 3).norm(), 1e-15);
}

TEST(Residual, OverloadsAgree)
{
    RobotParams p;
    std::mt19937_64 rng(4);
    const auto c = random_config(rng, 30.0, 0.1);
    const auto f = random_forces(rng);
    const auto prof = propagate_tensions(f, FrameChain(c, p), p);
    EXPECT_EQ(equilibrium_residual(c, f, kReferenceLoad, p), equilibrium_residual(c, prof, kReferenceLoad, p));
}

TEST(Residual, BaseWrenchMatchesGlobalActionReaction)
{
    // Sum r x F of every applied force directly in the global frame; the lumped
    // wrench carried by the first subsegment must equal it.
    RobotParams p;
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 10; ++trial)
    {
        const auto c = random_config(rng, 40.0, 0.2);
        const FrameChain chain(c, p);
        const auto prof = propagate_tensions(random_forces(rng), chain, p);

        Vec3 force = kReferenceLoad.external_force;
        Vec3 moment = kReferenceLoad.external_torque + chain.tip().translation.cross(kReferenceLoad.external_force);
        const Vec3 down(0, 0, -p.gravity_accel);
        for (int i = 1; i <= 20; ++i)
        {
            const Vec3 wd = p.disk_mass * down;
            const Vec3 wb = p.backbone_mass_per_subsegment * down;
            const Vec3 mid = chain.global[i - 1].apply(chain.backbone_midpoint[i]);
            force += wd + wb;
            moment += chain.global[i].translation.cross(wd) + mid.cross(wb);
        }
        for (int t = 0; t < 8; ++t)
        {
            const TendonId id = tendon_from_index(t, p);
            const int end = tendon_route_end(id, p);
            const auto& tens = prof.per_tendon[t];
            for (int i = 1; i <= end; ++i)
            {
                const Vec3 here = chain.global[i].apply(tendon_anchor(i, id, p));
                const Vec3 prev = chain.global[i - 1].apply(tendon_anchor(i - 1, id, p));
                Vec3 pull = tens[i - 1] * (prev - here).normalized();
                if (i < end)
                    pull += tens[i] * (chain.global[i + 1].apply(tendon_anchor(i + 1, id, p)) - here).normalized();
                force += pull;
                moment += here.cross(pull);
            }
        }
        const auto lumped = lumped_wrenches(chain, prof, kReferenceLoad, p);
        EXPECT_LT((lumped[0].force - force).norm(), 1e-12);
        EXPECT_LT((lumped[0].moment - moment).norm(), 1e-13);
    }
}

TEST(Residual, CovariantUnderQuarterTurn)
{
    // Rotating the robot by 90 deg about z maps tendon slot c onto c+1. The residual
    // blocks of the rotated problem are the original blocks rotated by Rz(90).
    RobotParams p;
    const Mat3 Rq = rot_z(kPi / 2);
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 5; ++trial)
    {
        const auto c = random_config(rng, 40.0, 0.1);
        const auto f = random_forces(rng);
        Configuration cr = c;
        for (auto& s : cr.states)
        {
            const Vec3 u = Rq * Vec3(s.beta, s.gamma, 0);
            s.beta = u.x();
            s.gamma = u.y();
        }
        TendonForceSet fr = f;
        for (int m = 0; m < 2; ++m)
            for (int slot = 0; slot < 4; ++slot)
                fr.base_tensions[4 * m + (slot + 1) % 4] = f.base_tensions[4 * m + slot];
        const LoadCase lr{true, Rq * kReferenceLoad.external_force, Rq * kReferenceLoad.external_torque};

        const auto r = equilibrium_residual(c, f, kReferenceLoad, p);
        const auto rr = equilibrium_residual(cr, fr, lr, p);
        for (int i = 0; i < 20; ++i)
        {
            const Vec3 block = r.segment<3>(3 * i);
            const Vec3 rotated = rr.segment<3>(3 * i);
            EXPECT_LT((Rq * block - rotated).norm(), 1e-12 * (1.0 + block.norm())) << trial << " " << i;
        }
    }
}

TEST(Residual, NonFiniteConfigurationIsReported)
{
    RobotParams p;
    Configuration c = Configuration::straight(20);
    c.states[4].beta = NAN;
    EXPECT_THROW(equilibrium_residual(c, TendonForceSet::uniform(p, 1.0), LoadCase::unloaded(), p), NonFiniteError);
}

TEST(TensionProfile, MaxAbsDifference)
{
    TensionProfile a{{{1.0, 0.9}, {2.0}}};
    TensionProfile b{{{1.0, 0.5}, {2.25}}};
    EXPECT_DOUBLE_EQ(a.max_abs_difference(b), 0.4);
}
