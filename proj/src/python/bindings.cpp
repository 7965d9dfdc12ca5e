#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/complex.h>

#include "abrlab/abr.hpp"
#include "abrlab/detector_limit.hpp"
#include "abrlab/grw.hpp"
#include "abrlab/runner.hpp"

namespace py = pybind11;
using namespace abrlab;

namespace {

BoundaryCondition bc_from_string(const std::string& name, double kappa, double alpha) {
    if (name == "dirichlet") return Dirichlet{};
    if (name == "neumann") return Neumann{};
    if (name == "absorbing") return Absorbing{kappa};
    if (name == "robin") return Robin{alpha};
    throw std::invalid_argument("unknown boundary condition: " + name);
}

py::object outcome_to_py(const DetectionOutcome& z) {
    if (const auto* d = std::get_if<Detected>(&z))
        return py::make_tuple(d->time, d->position, std::string(to_string(d->side)));
    return py::none();
}

}  // namespace

PYBIND11_MODULE(_abrlab, m) {
    m.doc() = "1D quantum detection-time models: absorbing boundary rule, "
              "imaginary-potential soft detectors, GRW collapse process";

    py::class_<SpatialGrid>(m, "SpatialGrid")
        .def(py::init<double, double, std::size_t>(), py::arg("x_min"), py::arg("x_max"),
             py::arg("n_points"))
        .def_readonly("x_min", &SpatialGrid::x_min)
        .def_readonly("x_max", &SpatialGrid::x_max)
        .def_readonly("n_points", &SpatialGrid::n_points)
        .def_property_readonly("dx", &SpatialGrid::dx)
        .def("nodes", &SpatialGrid::nodes);

    py::class_<PhysicalConstants>(m, "PhysicalConstants")
        .def(py::init<double, double>(), py::arg("hbar") = 1.0, py::arg("mass") = 1.0)
        .def_readonly("hbar", &PhysicalConstants::hbar)
        .def_readonly("mass", &PhysicalConstants::mass);

    py::class_<WaveFunction>(m, "WaveFunction")
        .def(py::init<SpatialGrid, std::vector<Complex>>(), py::arg("grid"), py::arg("values"))
        .def_readonly("grid", &WaveFunction::grid)
        .def_readonly("values", &WaveFunction::values);

    py::class_<DetectionDistribution>(m, "DetectionDistribution")
        .def_readonly("bin_edges", &DetectionDistribution::bin_edges)
        .def_readonly("mass_left", &DetectionDistribution::mass_left)
        .def_readonly("mass_right", &DetectionDistribution::mass_right)
        .def_readonly("p_never", &DetectionDistribution::p_never)
        .def_readonly("truncation_remainder", &DetectionDistribution::truncation_remainder)
        .def("detected_mass", &DetectionDistribution::detected_mass);

    py::class_<ConvergenceRow>(m, "ConvergenceRow")
        .def_readonly("L_nominal", &ConvergenceRow::L_nominal)
        .def_readonly("L_actual", &ConvergenceRow::L_actual)
        .def_readonly("lam", &ConvergenceRow::lambda)
        .def_readonly("tv_distance", &ConvergenceRow::tv_distance)
        .def_readonly("ks_distance", &ConvergenceRow::ks_distance)
        .def_readonly("detected_mass_error", &ConvergenceRow::detected_mass_error)
        .def_readonly("resolvable", &ConvergenceRow::resolvable)
        .def_readonly("tv_decreased", &ConvergenceRow::tv_decreased);

    m.def("gaussian_packet", &gaussian_packet, py::arg("grid"), py::arg("center"),
          py::arg("width"), py::arg("k0"));
    m.def("squared_norm", &squared_norm);
    m.def(
        "probability_current",
        [](const WaveFunction& psi, double hbar, double mass) {
            return probability_current(psi, PhysicalConstants(hbar, mass));
        },
        py::arg("psi"), py::arg("hbar") = 1.0, py::arg("mass") = 1.0);
    m.def("gaussian_convolve", &gaussian_convolve, py::arg("grid"), py::arg("f"),
          py::arg("sigma"));
    m.def("mean_detection_time", &mean_detection_time);
    m.def("total_variation", &total_variation);

    m.def(
        "abr_distribution",
        [](const WaveFunction& psi0, py::object kappa_left, py::object kappa_right, double dt,
           double t_max, std::size_t n_bins, const std::string& other_bc, double hbar,
           double mass) {
            DetectorProfile profile;
            if (!kappa_left.is_none()) profile.kappa_left = kappa_left.cast<double>();
            if (!kappa_right.is_none()) profile.kappa_right = kappa_right.cast<double>();
            PropagatorConfig cfg;
            cfg.dt = dt;
            cfg.t_max = t_max;
            cfg.bc_left = bc_from_string(other_bc, 0.0, 0.0);
            cfg.bc_right = cfg.bc_left;
            cfg.consts = PhysicalConstants(hbar, mass);
            return abr_distribution(psi0, profile, cfg, n_bins);
        },
        py::arg("psi0"), py::arg("kappa_left") = py::none(),
        py::arg("kappa_right") = py::none(), py::arg("dt"), py::arg("t_max"),
        py::arg("n_bins") = 200, py::arg("other_bc") = "dirichlet", py::arg("hbar") = 1.0,
        py::arg("mass") = 1.0);

    m.def(
        "soft_detection_distribution",
        [](const WaveFunction& psi0, const std::vector<double>& lambda, double dt, double t_max,
           std::size_t n_bins, const std::string& bc_left, const std::string& bc_right,
           double hbar, double mass) {
            DetectorProfile profile;
            profile.lambda = lambda;
            PropagatorConfig cfg;
            cfg.dt = dt;
            cfg.t_max = t_max;
            cfg.bc_left = bc_from_string(bc_left, 0.0, 0.0);
            cfg.bc_right = bc_from_string(bc_right, 0.0, 0.0);
            cfg.consts = PhysicalConstants(hbar, mass);
            return soft_detection_distribution(psi0, profile, cfg, n_bins);
        },
        py::arg("psi0"), py::arg("lam"), py::arg("dt"), py::arg("t_max"),
        py::arg("n_bins") = 200, py::arg("bc_left") = "dirichlet",
        py::arg("bc_right") = "neumann", py::arg("hbar") = 1.0, py::arg("mass") = 1.0);

    m.def(
        "run_grw",
        [](const WaveFunction& psi0, double lambda0, double sigma, double dt, double t_max,
           std::uint64_t seed) {
            GrwConfig cfg;
            cfg.dt = dt;
            cfg.t_max = t_max;
            cfg.sigma = sigma;
            const GrwRunRecord rec = run_grw(psi0, ConstantRate{lambda0}, cfg, seed);
            py::list events;
            for (const CollapseEvent& ev : rec.events)
                events.append(py::make_tuple(ev.time, ev.center, ev.pre_norm));
            return events;
        },
        py::arg("psi0"), py::arg("lambda0"), py::arg("sigma"), py::arg("dt"), py::arg("t_max"),
        py::arg("seed"));

    m.def(
        "first_detection_ensemble",
        [](const WaveFunction& psi0, const std::vector<double>& lambda, double sigma, double dt,
           double t_max, std::size_t n_runs, std::uint64_t base_seed,
           const std::string& bc_left, const std::string& bc_right) {
            GrwConfig cfg;
            cfg.dt = dt;
            cfg.t_max = t_max;
            cfg.sigma = sigma;
            cfg.bc_left = bc_from_string(bc_left, 0.0, 0.0);
            cfg.bc_right = bc_from_string(bc_right, 0.0, 0.0);
            const auto outcomes =
                first_detection_ensemble(psi0, PositionDependentRate{lambda}, cfg, n_runs,
                                         base_seed);
            py::list result;
            for (const DetectionOutcome& z : outcomes) result.append(outcome_to_py(z));
            return result;
        },
        py::arg("psi0"), py::arg("lam"), py::arg("sigma"), py::arg("dt"), py::arg("t_max"),
        py::arg("n_runs"), py::arg("base_seed"), py::arg("bc_left") = "dirichlet",
        py::arg("bc_right") = "neumann");

    m.def(
        "convergence_study",
        [](double packet_center, double packet_width, double packet_k0,
           const SpatialGrid& interior, double kappa_target, double L0, std::size_t levels,
           double dt, double t_max, std::size_t n_bins) {
            PropagatorConfig cfg;
            cfg.dt = dt;
            cfg.t_max = t_max;
            const LimitSequence seq = make_limit_sequence(kappa_target, L0, levels,
                                                          interior.dx(), cfg.consts);
            return convergence_study({packet_center, packet_width, packet_k0}, interior, seq,
                                     cfg, n_bins);
        },
        py::arg("packet_center"), py::arg("packet_width"), py::arg("packet_k0"),
        py::arg("interior"), py::arg("kappa_target"), py::arg("L0"), py::arg("levels"),
        py::arg("dt"), py::arg("t_max"), py::arg("n_bins") = 200);

    m.def(
        "run_config",
        [](const std::string& text) {
            const ParseResult parsed = parse_config(text);
            if (!parsed.ok()) {
                std::string msg = "invalid config:";
                for (const std::string& e : parsed.errors) msg += "\n  - " + e;
                throw std::invalid_argument(msg);
            }
            const RunArtifacts art = run_experiment(*parsed.config);
            py::dict files;
            files["manifest"] = art.manifest.string();
            files["summary"] = art.summary.string();
            if (!art.distribution.empty()) files["distribution"] = art.distribution.string();
            if (!art.outcomes.empty()) files["outcomes"] = art.outcomes.string();
            if (!art.convergence.empty()) files["convergence"] = art.convergence.string();
            return files;
        },
        py::arg("text"), "Parse a config text, run it, return the artifact paths.");
}
