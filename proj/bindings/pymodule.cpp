#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "seasyn/analysis.hpp"
#include "seasyn/errors.hpp"
#include "seasyn/frequency_response.hpp"
#include "seasyn/norms.hpp"
#include "seasyn/sea_model.hpp"
#include "seasyn/simulation.hpp"
#include "seasyn/state_space.hpp"
#include "seasyn/synthesis.hpp"

namespace py = pybind11;
using namespace seasyn;

namespace {

RationalTransferFunction make_tf(const std::vector<double>& num, const std::vector<double>& den) {
    return {Polynomial(num), Polynomial(den)};
}

WeightingSet weights_from_kwargs(double peak_sensitivity, double bandwidth, double steady_error,
                                 double control_weight, double disturbance_weight,
                                 double noise_weight, double motion_filter_cutoff) {
    WeightingSet w;
    w.peak_sensitivity = peak_sensitivity;
    w.bandwidth = bandwidth;
    w.steady_error = steady_error;
    w.error_weight = design_We(peak_sensitivity, bandwidth, steady_error);
    w.control_weight = RationalTransferFunction::constant(control_weight);
    w.disturbance_weight = RationalTransferFunction::constant(disturbance_weight);
    w.noise_weight = RationalTransferFunction::constant(noise_weight);
    w.motion_filter = motion_filter_cutoff > 0.0
                          ? lowpass2(motion_filter_cutoff)
                          : RationalTransferFunction::constant(1.0);
    return w;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "mixed H2/H-infinity impedance control toolkit for a cable-driven SEA";

    py::register_exception<Error>(m, "SeasynError");

    py::class_<Polynomial>(m, "Polynomial")
        .def(py::init<std::vector<double>>())
        .def_property_readonly("coeffs", &Polynomial::coeffs)
        .def("degree", &Polynomial::degree)
        .def("roots", &Polynomial::roots)
        .def("__call__", [](const Polynomial& p, std::complex<double> s) { return p.eval(s); });

    py::class_<RationalTransferFunction>(m, "TransferFunction")
        .def(py::init(&make_tf), py::arg("num"), py::arg("den"))
        .def_property_readonly("num", [](const RationalTransferFunction& g) { return g.num().coeffs(); })
        .def_property_readonly("den", [](const RationalTransferFunction& g) { return g.den().coeffs(); })
        .def("is_proper", &RationalTransferFunction::is_proper)
        .def("dc_gain", &RationalTransferFunction::dc_gain)
        .def("minimize", &RationalTransferFunction::minimize, py::arg("root_tol") = 1e-7)
        .def("__call__",
             [](const RationalTransferFunction& g, std::complex<double> s) { return g.eval(s); })
        .def("__mul__", [](const RationalTransferFunction& a, const RationalTransferFunction& b) {
            return a * b;
        });

    py::class_<StateSpaceModel>(m, "StateSpaceModel")
        .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd,
                      std::vector<std::string>, std::vector<std::string>>(),
             py::arg("A"), py::arg("B"), py::arg("C"), py::arg("D"),
             py::arg("input_labels") = std::vector<std::string>{},
             py::arg("output_labels") = std::vector<std::string>{})
        .def_readonly("A", &StateSpaceModel::A)
        .def_readonly("B", &StateSpaceModel::B)
        .def_readonly("C", &StateSpaceModel::C)
        .def_readonly("D", &StateSpaceModel::D)
        .def("n_states", &StateSpaceModel::n_states)
        .def("dc_gain", &StateSpaceModel::dc_gain);

    py::class_<StabilityInfo>(m, "StabilityInfo")
        .def_readonly("hurwitz", &StabilityInfo::hurwitz)
        .def_readonly("spectral_abscissa", &StabilityInfo::spectral_abscissa);

    m.def("realize", &realize, py::arg("tf"));
    m.def("transfer_function_of", &transfer_function_of, py::arg("sys"), py::arg("output") = 0,
          py::arg("input") = 0);
    m.def("is_hurwitz", py::overload_cast<const StateSpaceModel&>(&is_hurwitz));
    m.def("h2_norm", &h2_norm);
    m.def("hinf_norm", &hinf_norm, py::arg("sys"), py::arg("rel_tol") = 1e-6);
    m.def("solve_lyapunov", &solve_lyapunov, py::arg("A"), py::arg("Q"));
    m.def("log_grid", &log_grid, py::arg("w_lo"), py::arg("w_hi"), py::arg("n"));

    py::class_<FrequencyResponse>(m, "FrequencyResponse")
        .def_readonly("omegas", &FrequencyResponse::omegas)
        .def_readonly("values", &FrequencyResponse::values);
    m.def("frequency_response", &frequency_response, py::arg("sys"), py::arg("grid"));
    m.def("magnitude_db", &magnitude_db, py::arg("fr"), py::arg("output") = 0, py::arg("input") = 0);
    m.def("phase_deg_unwrapped", &phase_deg_unwrapped, py::arg("fr"), py::arg("output") = 0,
          py::arg("input") = 0);

    py::class_<SeaParameters>(m, "SeaParameters")
        .def(py::init<>())
        .def_readwrite("motor_inertia", &SeaParameters::motor_inertia)
        .def_readwrite("motor_damping", &SeaParameters::motor_damping)
        .def_readwrite("spring_stiffness", &SeaParameters::spring_stiffness)
        .def_readwrite("velocity_loop_kp", &SeaParameters::velocity_loop_kp)
        .def_readwrite("velocity_loop_ki", &SeaParameters::velocity_loop_ki)
        .def_readwrite("motor_velocity_limit", &SeaParameters::motor_velocity_limit);

    py::class_<DesiredImpedance>(m, "DesiredImpedance")
        .def(py::init([](double inertia, double damping, double stiffness) {
                 DesiredImpedance d;
                 d.virtual_inertia = inertia;
                 d.virtual_damping = damping;
                 d.virtual_stiffness = stiffness;
                 return d;
             }),
             py::arg("inertia") = 0.0, py::arg("damping") = 0.0, py::arg("stiffness") = 0.0)
        .def_readwrite("virtual_inertia", &DesiredImpedance::virtual_inertia)
        .def_readwrite("virtual_damping", &DesiredImpedance::virtual_damping)
        .def_readwrite("virtual_stiffness", &DesiredImpedance::virtual_stiffness);

    py::class_<WeightingSet>(m, "WeightingSet")
        .def(py::init(&weights_from_kwargs), py::arg("peak_sensitivity") = 1.0,
             py::arg("bandwidth") = 60.0, py::arg("steady_error") = 0.005,
             py::arg("control_weight") = 1.0 / 44.0, py::arg("disturbance_weight") = 0.1,
             py::arg("noise_weight") = 0.1, py::arg("motion_filter_cutoff") = 0.0)
        .def_readonly("error_weight", &WeightingSet::error_weight)
        .def_readonly("motion_filter", &WeightingSet::motion_filter);

    m.def("design_We", &design_We, py::arg("peak_sensitivity"), py::arg("bandwidth_rad_s"),
          py::arg("steady_error"));
    m.def("lowpass2", &lowpass2, py::arg("cutoff_rad_s"));
    m.def("build_sea_plant", &build_sea_plant, py::arg("params"));
    m.def("desired_models", &desired_models, py::arg("impedance"));

    py::class_<GeneralizedPlant>(m, "GeneralizedPlant")
        .def_readonly("sys", &GeneralizedPlant::sys)
        .def("order", &GeneralizedPlant::order);
    m.def("build_generalized_plant",
          py::overload_cast<const SeaParameters&, const DesiredImpedance&, const WeightingSet&>(
              &build_generalized_plant),
          py::arg("params"), py::arg("impedance"), py::arg("weights"));

    py::class_<SynthesisBounds>(m, "SynthesisBounds")
        .def(py::init([](double ge, double gu) { return SynthesisBounds{ge, gu}; }),
             py::arg("hinf_error_bound"), py::arg("h2_control_bound"))
        .def_readwrite("hinf_error_bound", &SynthesisBounds::hinf_error_bound)
        .def_readwrite("h2_control_bound", &SynthesisBounds::h2_control_bound);

    py::class_<ControllerRealization>(m, "ControllerRealization")
        .def_readonly("A_k", &ControllerRealization::A_k)
        .def_readonly("B_k", &ControllerRealization::B_k)
        .def_readonly("C_k", &ControllerRealization::C_k)
        .def_readonly("D_k", &ControllerRealization::D_k)
        .def("order", &ControllerRealization::order);

    py::class_<SynthesisResult>(m, "SynthesisResult")
        .def_readonly("controller", &SynthesisResult::controller)
        .def_readonly("lmi_margin", &SynthesisResult::lmi_margin)
        .def_readonly("sdp_iterations", &SynthesisResult::sdp_iterations)
        .def_readonly("warnings", &SynthesisResult::warnings);

    py::class_<ClosedLoopSystem>(m, "ClosedLoopSystem")
        .def_readonly("sys", &ClosedLoopSystem::sys)
        .def_readonly("plant_order", &ClosedLoopSystem::plant_order)
        .def_readonly("controller_order", &ClosedLoopSystem::controller_order);

    py::class_<VerificationReport>(m, "VerificationReport")
        .def_readonly("hinf_error", &VerificationReport::hinf_error)
        .def_readonly("h2_control", &VerificationReport::h2_control)
        .def_readonly("spectral_abscissa", &VerificationReport::spectral_abscissa)
        .def_readonly("pass_", &VerificationReport::pass)
        .def("__bool__", [](const VerificationReport& r) { return r.pass; });

    m.def("synthesize_mixed", &synthesize_mixed, py::arg("plant"), py::arg("bounds"),
          py::arg("options") = SynthesisOptions{});
    py::class_<SynthesisOptions>(m, "SynthesisOptions").def(py::init<>());
    m.def("close_loop", &close_loop, py::arg("plant"), py::arg("controller"));
    m.def("verify", &verify, py::arg("plant"), py::arg("controller"), py::arg("bounds"));

    py::class_<SignalSpec>(m, "SignalSpec")
        .def_static("sinusoid", &SignalSpec::sinusoid, py::arg("amplitude"),
                    py::arg("frequency_hz"), py::arg("phase_rad") = 0.0)
        .def_static("constant", &SignalSpec::constant, py::arg("value"))
        .def_static("from_file", &SignalSpec::from_file, py::arg("path"));

    py::class_<SimulationSettings>(m, "SimulationSettings")
        .def(py::init<>())
        .def_readwrite("duration_s", &SimulationSettings::duration_s)
        .def_readwrite("sample_rate_hz", &SimulationSettings::sample_rate_hz)
        .def_readwrite("steady_window_fraction", &SimulationSettings::steady_window_fraction);

    py::class_<SimulationMetrics>(m, "SimulationMetrics")
        .def_readonly("max_abs_error", &SimulationMetrics::max_abs_error)
        .def_readonly("max_abs_control", &SimulationMetrics::max_abs_control)
        .def_readonly("max_abs_tau_d", &SimulationMetrics::max_abs_tau_d);

    py::class_<SimulationTrace>(m, "SimulationTrace")
        .def_readonly("time", &SimulationTrace::time)
        .def_readonly("phi_L", &SimulationTrace::phi_L)
        .def_readonly("tau_d", &SimulationTrace::tau_d)
        .def_readonly("tau_L", &SimulationTrace::tau_L)
        .def_readonly("e", &SimulationTrace::e)
        .def_readonly("omega_d", &SimulationTrace::omega_d)
        .def_readonly("metrics", &SimulationTrace::metrics);

    m.def("simulate", &simulate, py::arg("closed_loop"), py::arg("hand_motion"),
          py::arg("disturbance"), py::arg("noise"), py::arg("settings") = SimulationSettings{});
    m.def("recommended_sample_rate", &recommended_sample_rate, py::arg("closed_loop"),
          py::arg("minimum_hz") = 2000.0);

    py::class_<PassivityReport>(m, "PassivityReport")
        .def_readonly("grid", &PassivityReport::grid)
        .def_readonly("phase_deg", &PassivityReport::phase_deg)
        .def_readonly("min_phase_margin_deg", &PassivityReport::min_phase_margin_deg)
        .def_readonly("passive_on_band", &PassivityReport::passive_on_band)
        .def_readonly("closed_loop_hurwitz", &PassivityReport::closed_loop_hurwitz);

    m.def("actual_impedance", &actual_impedance, py::arg("closed_loop"), py::arg("grid"));
    m.def("check_relaxed_passivity",
          py::overload_cast<const ClosedLoopSystem&, double, double>(&check_relaxed_passivity),
          py::arg("closed_loop"), py::arg("f_max_hz"), py::arg("tolerance_deg") = 0.5);
    m.def("wphi_deterioration", &wphi_deterioration, py::arg("desired_impedance"),
          py::arg("motion_filter"), py::arg("f_max_hz"));
}
