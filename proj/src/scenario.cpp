#include "tdcr/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace tdcr {

namespace {

std::string anchored(const std::string& source, int line, const std::string& message)
{
    return line > 0 ? source + ":" + std::to_string(line) + ": " + message : source + ": " + message;
}

// Parses one YAML mapping against a fixed key set, keeping the source name and
// line numbers for error messages.
class Section
{
public:
    Section(const YAML::Node& node, std::string name, const std::string& source)
        : node_(node), name_(std::move(name)), source_(source)
    {
        if (!node_.IsMap())
            fail(node_, "section '" + name_ + "' must be a mapping");
    }

    int line(const YAML::Node& node) const { return node.Mark().is_null() ? 0 : node.Mark().line + 1; }
    int line() const { return line(node_); }

    [[noreturn]] void fail(const YAML::Node& node, const std::string& message) const
    {
        throw ScenarioError(source_, line(node), message);
    }

    void allow_only(std::initializer_list<const char*> keys) const
    {
        const std::set<std::string> known(keys.begin(), keys.end());
        for (const auto& kv : node_)
        {
            const auto key = kv.first.as<std::string>();
            if (!known.contains(key))
                fail(kv.first, "unknown key '" + key + "' in " + where());
        }
    }

    bool has(const char* key) const { return static_cast<bool>(node_[key]); }
    YAML::Node child(const char* key) const { return node_[key]; }

    template <class T>
    void read(const char* key, T& target) const
    {
        const YAML::Node value = node_[key];
        if (!value)
            return;
        if (!value.IsScalar())
            fail(value, "'" + std::string(key) + "' in " + where() + " must be a scalar");
        try
        {
            target = value.as<T>();
        }
        catch (const YAML::BadConversion&)
        {
            fail(value, "'" + std::string(key) + "' in " + where() + " has the wrong type ('" + value.Scalar() + "')");
        }
    }

    Vec3 read_vec3(const char* key, const Vec3& fallback) const
    {
        const YAML::Node value = node_[key];
        if (!value)
            return fallback;
        const auto list = read_list(value, key);
        if (list.size() != 3)
            fail(value, "'" + std::string(key) + "' in " + where() + " must have 3 components");
        return {list[0], list[1], list[2]};
    }

    std::vector<double> read_list(const YAML::Node& value, const std::string& key) const
    {
        if (!value.IsSequence())
            fail(value, "'" + key + "' in " + where() + " must be a list of numbers");
        std::vector<double> out;
        for (const auto& item : value)
        {
            try
            {
                out.push_back(item.as<double>());
            }
            catch (const YAML::BadConversion&)
            {
                fail(item, "'" + key + "' in " + where() + " contains a non-number");
            }
        }
        return out;
    }

    // Runs a validate() call, re-raising its message at this section's line.
    void check(const std::function<void()>& validate) const
    {
        try
        {
            validate();
        }
        catch (const std::invalid_argument& e)
        {
            fail(node_, e.what());
        }
        catch (const std::out_of_range& e)
        {
            fail(node_, e.what());
        }
    }

private:
    std::string where() const { return name_ == "<top>" ? "the scenario" : "section '" + name_ + "'"; }

    YAML::Node node_;
    std::string name_;
    const std::string& source_;
};

RobotParams parse_robot(const Section& s)
{
    s.allow_only({"num_segments", "disks_per_segment", "subsegment_length", "tendon_pitch_radius",
                  "tendons_per_segment", "backbone_young_modulus", "backbone_shear_modulus",
                  "backbone_second_moment", "bending_stiffness_coeff", "disk_mass", "backbone_mass_per_subsegment",
                  "gravity_accel"});
    RobotParams p;
    s.read("num_segments", p.num_segments);
    s.read("disks_per_segment", p.disks_per_segment);
    s.read("subsegment_length", p.subsegment_length);
    s.read("tendon_pitch_radius", p.tendon_pitch_radius);
    s.read("tendons_per_segment", p.tendons_per_segment);
    s.read("backbone_young_modulus", p.backbone_young_modulus);
    s.read("backbone_shear_modulus", p.backbone_shear_modulus);
    s.read("backbone_second_moment", p.backbone_second_moment);
    s.read("bending_stiffness_coeff", p.bending_stiffness_coeff);
    s.read("disk_mass", p.disk_mass);
    s.read("backbone_mass_per_subsegment", p.backbone_mass_per_subsegment);
    s.read("gravity_accel", p.gravity_accel);
    s.check([&] { p.validate(); });
    return p;
}

LoadCase parse_load(const Section& s)
{
    s.allow_only({"gravity", "external_force", "external_torque"});
    LoadCase load = Scenario{}.load;
    s.read("gravity", load.gravity_on);
    load.external_force = s.read_vec3("external_force", load.external_force);
    load.external_torque = s.read_vec3("external_torque", load.external_torque);
    s.check([&] { load.validate(); });
    return load;
}

std::vector<double> scalar_or_list(const Section& s, const char* key, std::size_t count, double fallback)
{
    const YAML::Node value = s.child(key);
    if (!value)
        return std::vector<double>(count, fallback);
    if (value.IsScalar())
    {
        double v = fallback;
        s.read(key, v);
        return std::vector<double>(count, v);
    }
    return s.read_list(value, key);
}

ForceBounds parse_bounds(const Section& s, const RobotParams& robot)
{
    s.allow_only({"lower", "upper"});
    const auto n = static_cast<std::size_t>(robot.num_tendons());
    ForceBounds b{scalar_or_list(s, "lower", n, 0.0), scalar_or_list(s, "upper", n, 10.0)};
    s.check([&] { b.validate(robot); });
    return b;
}

GAConfig parse_ga(const Section& s)
{
    s.allow_only({"population_size", "max_generations", "convergence_tol", "stall_generations", "elitism_count", "tournament_size",
                  "crossover_rate", "mutation_rate", "mutation_sigma", "rng_seed"});
    GAConfig ga;
    s.read("population_size", ga.population_size);
    s.read("max_generations", ga.max_generations);
    s.read("convergence_tol", ga.convergence_tol);
    s.read("stall_generations", ga.stall_generations);
    s.read("elitism_count", ga.elitism_count);
    s.read("tournament_size", ga.tournament_size);
    s.read("crossover_rate", ga.crossover_rate);
    s.read("mutation_rate", ga.mutation_rate);
    s.read("mutation_sigma", ga.mutation_sigma);
    s.read("rng_seed", ga.rng_seed);
    s.check([&] { ga.validate(); });
    return ga;
}

SolverSettings parse_solver(const Section& s)
{
    s.allow_only({"residual_tol", "max_newton_iters", "damping_min", "fd_step", "friction_loop_tol",
                  "max_friction_iters"});
    SolverSettings st;
    s.read("residual_tol", st.residual_tol);
    s.read("max_newton_iters", st.max_newton_iters);
    s.read("damping_min", st.damping_min);
    s.read("fd_step", st.fd_step);
    s.read("friction_loop_tol", st.friction_loop_tol);
    s.read("max_friction_iters", st.max_friction_iters);
    s.check([&] { st.validate(); });
    return st;
}

template <class Fn>
void emit_section(YAML::Emitter& out, const char* name, Fn&& body)
{
    out << YAML::Key << name << YAML::Value << YAML::BeginMap;
    body();
    out << YAML::EndMap;
}

void emit_list(YAML::Emitter& out, const char* key, const auto& values)
{
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (double v : values)
        out << v;
    out << YAML::EndSeq;
}

}  // namespace

ScenarioError::ScenarioError(const std::string& source, int line, const std::string& message)
    : std::runtime_error(anchored(source, line, message)), line_(line)
{
}

void Scenario::validate() const
{
    robot.validate();
    load.validate();
    bounds.validate(robot);
    ga.validate();
    solver.validate();
    if (forces)
        forces->validate(robot);
    if (sample_count && *sample_count < 0)
        throw std::invalid_argument("sample_count must be >= 0");
}

Scenario parse_scenario(const std::string& text, const std::string& source_name)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException& e)
    {
        throw ScenarioError(source_name, e.mark.is_null() ? 0 : e.mark.line + 1, e.msg);
    }
    if (!root || root.IsNull())
        throw ScenarioError(source_name, 0, "scenario file is empty");

    const Section top(root, "<top>", source_name);
    top.allow_only({"robot", "load", "bounds", "ga", "solver", "forces", "sample_count", "seed"});

    Scenario sc;
    if (top.has("robot"))
        sc.robot = parse_robot(Section(top.child("robot"), "robot", source_name));
    if (top.has("load"))
        sc.load = parse_load(Section(top.child("load"), "load", source_name));
    sc.bounds = top.has("bounds") ? parse_bounds(Section(top.child("bounds"), "bounds", source_name), sc.robot)
                                  : ForceBounds::uniform(sc.robot, 0.0, 10.0);
    if (top.has("ga"))
        sc.ga = parse_ga(Section(top.child("ga"), "ga", source_name));
    if (top.has("solver"))
        sc.solver = parse_solver(Section(top.child("solver"), "solver", source_name));
    if (top.has("forces"))
    {
        const YAML::Node node = top.child("forces");
        TendonForceSet forces{top.read_list(node, "forces")};
        try
        {
            forces.validate(sc.robot);
        }
        catch (const std::invalid_argument& e)
        {
            top.fail(node, e.what());
        }
        sc.forces = std::move(forces);
    }
    if (top.has("sample_count"))
    {
        int count = 0;
        top.read("sample_count", count);
        if (count < 0)
            top.fail(top.child("sample_count"), "sample_count must be >= 0");
        sc.sample_count = count;
    }
    top.read("seed", sc.seed);
    return sc;
}

Scenario load_scenario(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ScenarioError(path.string(), 0, "cannot open scenario file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path.string());
}

std::string dump_scenario(const Scenario& sc)
{
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out.SetBoolFormat(YAML::TrueFalseBool);
    out << YAML::BeginMap;
    emit_section(out, "robot", [&] {
        const auto& p = sc.robot;
        out << YAML::Key << "num_segments" << YAML::Value << p.num_segments;
        out << YAML::Key << "disks_per_segment" << YAML::Value << p.disks_per_segment;
        out << YAML::Key << "subsegment_length" << YAML::Value << p.subsegment_length;
        out << YAML::Key << "tendon_pitch_radius" << YAML::Value << p.tendon_pitch_radius;
        out << YAML::Key << "tendons_per_segment" << YAML::Value << p.tendons_per_segment;
        out << YAML::Key << "backbone_young_modulus" << YAML::Value << p.backbone_young_modulus;
        out << YAML::Key << "backbone_shear_modulus" << YAML::Value << p.backbone_shear_modulus;
        out << YAML::Key << "backbone_second_moment" << YAML::Value << p.backbone_second_moment;
        out << YAML::Key << "bending_stiffness_coeff" << YAML::Value << p.bending_stiffness_coeff;
        out << YAML::Key << "disk_mass" << YAML::Value << p.disk_mass;
        out << YAML::Key << "backbone_mass_per_subsegment" << YAML::Value << p.backbone_mass_per_subsegment;
        out << YAML::Key << "gravity_accel" << YAML::Value << p.gravity_accel;
    });
    emit_section(out, "load", [&] {
        out << YAML::Key << "gravity" << YAML::Value << sc.load.gravity_on;
        emit_list(out, "external_force", sc.load.external_force);
        emit_list(out, "external_torque", sc.load.external_torque);
    });
    emit_section(out, "bounds", [&] {
        emit_list(out, "lower", sc.bounds.lower);
        emit_list(out, "upper", sc.bounds.upper);
    });
    emit_section(out, "ga", [&] {
        const auto& g = sc.ga;
        out << YAML::Key << "population_size" << YAML::Value << g.population_size;
        out << YAML::Key << "max_generations" << YAML::Value << g.max_generations;
        out << YAML::Key << "convergence_tol" << YAML::Value << g.convergence_tol;
        out << YAML::Key << "stall_generations" << YAML::Value << g.stall_generations;
        out << YAML::Key << "elitism_count" << YAML::Value << g.elitism_count;
        out << YAML::Key << "tournament_size" << YAML::Value << g.tournament_size;
        out << YAML::Key << "crossover_rate" << YAML::Value << g.crossover_rate;
        out << YAML::Key << "mutation_rate" << YAML::Value << g.mutation_rate;
        out << YAML::Key << "mutation_sigma" << YAML::Value << g.mutation_sigma;
        out << YAML::Key << "rng_seed" << YAML::Value << g.rng_seed;
    });
    emit_section(out, "solver", [&] {
        const auto& s = sc.solver;
        out << YAML::Key << "residual_tol" << YAML::Value << s.residual_tol;
        out << YAML::Key << "max_newton_iters" << YAML::Value << s.max_newton_iters;
        out << YAML::Key << "damping_min" << YAML::Value << s.damping_min;
        out << YAML::Key << "fd_step" << YAML::Value << s.fd_step;
        out << YAML::Key << "friction_loop_tol" << YAML::Value << s.friction_loop_tol;
        out << YAML::Key << "max_friction_iters" << YAML::Value << s.max_friction_iters;
    });
    if (sc.forces)
        emit_list(out, "forces", sc.forces->base_tensions);
    if (sc.sample_count)
        out << YAML::Key << "sample_count" << YAML::Value << *sc.sample_count;
    out << YAML::Key << "seed" << YAML::Value << sc.seed;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace tdcr
