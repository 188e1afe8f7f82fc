#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cyclosense/detectors.hpp"
#include "cyclosense/error.hpp"
#include "cyclosense/fusion.hpp"
#include "cyclosense/harness.hpp"
#include "cyclosense/optimal_users.hpp"
#include "cyclosense/pso_threshold.hpp"
#include "cyclosense/sigmodel.hpp"

namespace py = pybind11;
namespace cs = cyclosense;

namespace {

py::array_t<double> to_array(const std::vector<double>& v) {
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

cs::SampleBuffer to_buffer(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
    if (a.ndim() != 1) throw cs::ArgumentError("expected a one-dimensional sample array");
    cs::SampleBuffer buf;
    buf.samples.assign(a.data(), a.data() + a.size());
    return buf;
}

using Samples = py::array_t<double, py::array::c_style | py::array::forcecast>;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cyclostationary spectrum sensing core";

    static py::exception<cs::ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
    static py::exception<cs::RunError> run_error(m, "RunError", PyExc_RuntimeError);
    static py::exception<cs::IoError> io_error(m, "IoError", PyExc_OSError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const cs::ConfigError& e) {
            py::set_error(config_error, e.what());
        } catch (const cs::RunError& e) {
            py::set_error(run_error, e.what());
        } catch (const cs::IoError& e) {
            py::set_error(io_error, e.what());
        }
    });

    // signal models
    py::class_<cs::OfdmParams>(m, "OfdmParams")
        .def(py::init<>())
        .def_readwrite("n_subcarriers", &cs::OfdmParams::n_subcarriers)
        .def_readwrite("n_symbols", &cs::OfdmParams::n_symbols)
        .def_readwrite("guard_fraction", &cs::OfdmParams::guard_fraction)
        .def_readwrite("carrier_fc", &cs::OfdmParams::carrier_fc)
        .def_readwrite("subcarrier_bw", &cs::OfdmParams::subcarrier_bw)
        .def_property_readonly("burst_length", &cs::OfdmParams::burst_length)
        .def("validate", [](const cs::OfdmParams& p) { cs::validate(p); });

    m.def("generate_ofdm", [](const cs::OfdmParams& p, std::uint64_t seed) {
        return to_array(cs::generate_ofdm(p, seed).samples);
    }, py::arg("params"), py::arg("seed"));
    m.def("generate_tone", [](double f0, double amplitude, std::size_t length) {
        return to_array(cs::generate_tone(f0, amplitude, length).samples);
    }, py::arg("f0"), py::arg("amplitude"), py::arg("length"));
    m.def("generate_noise", [](double variance, std::size_t length, std::uint64_t seed) {
        return to_array(cs::generate_noise({variance, seed}, length).samples);
    }, py::arg("variance"), py::arg("length"), py::arg("seed"));
    m.def("apply_awgn", [](const Samples& x, double snr_db, std::uint64_t seed) {
        return to_array(cs::apply_awgn(to_buffer(x), snr_db, seed).samples);
    }, py::arg("signal"), py::arg("snr_db"), py::arg("seed"));

    // detectors
    py::class_<cs::DetectorConfig>(m, "DetectorConfig")
        .def(py::init<>())
        .def_readwrite("window_len", &cs::DetectorConfig::window_len)
        .def_readwrite("overlap_fraction", &cs::DetectorConfig::overlap_fraction)
        .def_readwrite("alpha_set", &cs::DetectorConfig::alpha_set)
        .def_readwrite("peak_neighborhood", &cs::DetectorConfig::peak_neighborhood);

    py::class_<cs::CsdEstimate>(m, "CsdEstimate")
        .def_property_readonly("f_axis", [](const cs::CsdEstimate& e) { return to_array(e.f_axis); })
        .def_property_readonly("alpha_axis", [](const cs::CsdEstimate& e) { return to_array(e.alpha_axis); })
        .def_property_readonly("magnitudes",
                               [](const cs::CsdEstimate& e) {
                                   // rows: alpha, columns: f
                                   py::array_t<double> out({e.alpha_axis.size(), e.f_axis.size()});
                                   std::copy(e.magnitudes.begin(), e.magnitudes.end(), out.mutable_data());
                                   return out;
                               })
        .def_readonly("window_len", &cs::CsdEstimate::window_len)
        .def_readonly("n_blocks", &cs::CsdEstimate::n_blocks);

    m.def("full_alpha_grid", &cs::full_alpha_grid, py::arg("window_len"));
    m.def("targeted_alpha_set", &cs::targeted_alpha_set, py::arg("fc"), py::arg("window_len"),
          py::arg("neighborhood"));
    m.def("energy_statistic", [](const Samples& x) { return cs::energy_statistic(to_buffer(x)); }, py::arg("x"));
    m.def("cyclic_autocorrelation",
          [](const Samples& x, double alpha, long tau) { return cs::cyclic_autocorrelation(to_buffer(x), alpha, tau); },
          py::arg("x"), py::arg("alpha"), py::arg("tau"));
    m.def("estimate_csd", [](const Samples& x, const cs::DetectorConfig& cfg) {
        return cs::estimate_csd(to_buffer(x), cfg);
    }, py::arg("x"), py::arg("config"));
    m.def("peak_statistic", &cs::peak_statistic, py::arg("csd"), py::arg("fc"), py::arg("neighborhood"));
    m.def("cyclostationary_statistic", [](const Samples& x, const cs::DetectorConfig& cfg, double fc) {
        return cs::cyclostationary_statistic(to_buffer(x), cfg, fc);
    }, py::arg("x"), py::arg("config"), py::arg("fc"));
    m.def("decide", [](double statistic, double lambda) {
        return cs::decide(statistic, lambda).hypothesis == cs::Hypothesis::kH1;
    }, py::arg("statistic"), py::arg("threshold"), "True for H1 (statistic strictly above threshold).");

    // fusion and optimal vote count
    py::class_<cs::FusionRule>(m, "FusionRule")
        .def_static("and_rule", &cs::FusionRule::and_rule)
        .def_static("or_rule", &cs::FusionRule::or_rule)
        .def_static("majority", &cs::FusionRule::majority)
        .def_static("k_out_of_n", &cs::FusionRule::k_out_of_n, py::arg("k"))
        .def_static("parse", &cs::FusionRule::parse, py::arg("text"))
        .def_property_readonly("name", &cs::FusionRule::name)
        .def("__repr__", [](const cs::FusionRule& r) { return "FusionRule(" + r.name() + ")"; });
    m.def("rule_to_k", &cs::rule_to_k, py::arg("rule"), py::arg("n"));
    m.def("fusion_probability", &cs::fusion_probability, py::arg("p"), py::arg("n"), py::arg("k"));

    py::class_<cs::UserCountResult>(m, "UserCountResult")
        .def_readonly("n_opt", &cs::UserCountResult::n_opt)
        .def_readonly("alpha_ratio", &cs::UserCountResult::alpha_ratio)
        .def_readonly("error_at_opt", &cs::UserCountResult::error_at_opt);
    m.def("error_total", &cs::error_total, py::arg("pf"), py::arg("pd"), py::arg("k_users"), py::arg("n"));
    m.def("optimal_n", &cs::optimal_n, py::arg("pf"), py::arg("pm"), py::arg("k_users"));
    m.def("brute_force_optimal_n", &cs::brute_force_optimal_n, py::arg("pf"), py::arg("pd"), py::arg("k_users"));

    // PSO
    py::class_<cs::PsoConfig>(m, "PsoConfig")
        .def(py::init<>())
        .def_readwrite("c0", &cs::PsoConfig::c0)
        .def_readwrite("c1", &cs::PsoConfig::c1)
        .def_readwrite("c2", &cs::PsoConfig::c2)
        .def_readwrite("max_iters", &cs::PsoConfig::max_iters)
        .def_readwrite("tolerance_zeta", &cs::PsoConfig::tolerance_zeta)
        .def_readwrite("standard_inertia", &cs::PsoConfig::standard_inertia)
        .def("set_fixed_r", [](cs::PsoConfig& c, double r1, double r2) {
            c.r_mode = cs::PsoConfig::RMode::fixed(r1, r2);
        }, py::arg("r1"), py::arg("r2"))
        .def("set_random_r", [](cs::PsoConfig& c, std::uint64_t seed) {
            c.r_mode = cs::PsoConfig::RMode::random(seed);
        }, py::arg("seed"));

    py::class_<cs::PsoResult>(m, "PsoResult")
        .def_readonly("gbest", &cs::PsoResult::gbest)
        .def_readonly("gbest_fitness", &cs::PsoResult::gbest_fitness)
        .def_readonly("history", &cs::PsoResult::history)
        .def_readonly("fitness_history", &cs::PsoResult::fitness_history);
    m.def("pso_run", [](const std::vector<double>& initial, const cs::PsoConfig& cfg, const cs::FitnessFn& fitness) {
        return cs::pso_run(initial, cfg, fitness);
    }, py::arg("initial_thresholds"), py::arg("config"), py::arg("fitness"));

    // harness
    py::class_<cs::Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("snr_db", &cs::Scenario::snr_db)
        .def_readwrite("n_users", &cs::Scenario::n_users)
        .def_readwrite("n_trials", &cs::Scenario::n_trials)
        .def_readwrite("detector", &cs::Scenario::detector)
        .def_readwrite("ofdm", &cs::Scenario::ofdm)
        .def_readwrite("fusion_rule", &cs::Scenario::fusion_rule)
        .def_readwrite("base_seed", &cs::Scenario::base_seed)
        .def("validate", [](const cs::Scenario& s) { cs::validate(s); });
    m.def("parse_scenario", [](const std::string& text) { return cs::parse_scenario(text); }, py::arg("text"));
    m.def("load_scenario", [](const std::filesystem::path& p) { return cs::load_scenario(p); }, py::arg("path"));

    py::class_<cs::TrialStats>(m, "TrialStats")
        .def_readonly("n_users", &cs::TrialStats::n_users)
        .def_readonly("n_trials", &cs::TrialStats::n_trials)
        .def_property_readonly("h0", [](const cs::TrialStats& t) {
            py::array_t<double> out({t.n_users, t.n_trials});
            std::copy(t.h0.begin(), t.h0.end(), out.mutable_data());
            return out;
        })
        .def_property_readonly("h1", [](const cs::TrialStats& t) {
            py::array_t<double> out({t.n_users, t.n_trials});
            std::copy(t.h1.begin(), t.h1.end(), out.mutable_data());
            return out;
        });
    m.def("run_trials", &cs::run_trials, py::arg("scenario"));

    py::class_<cs::RocPoint>(m, "RocPoint")
        .def_readonly("threshold", &cs::RocPoint::threshold)
        .def_readonly("pf_hat", &cs::RocPoint::pf_hat)
        .def_readonly("pd_hat", &cs::RocPoint::pd_hat)
        .def_readonly("pm_hat", &cs::RocPoint::pm_hat)
        .def_readonly("error_hat", &cs::RocPoint::error_hat)
        .def_readonly("n_trials", &cs::RocPoint::n_trials);
    py::class_<cs::RocCurve>(m, "RocCurve")
        .def_readonly("rule", &cs::RocCurve::rule)
        .def_readonly("n_users", &cs::RocCurve::n_users)
        .def_readonly("points", &cs::RocCurve::points);
    m.def("roc_curve", py::overload_cast<const cs::Scenario&>(&cs::roc_curve), py::arg("scenario"),
          "[fused curve for scenario.fusion_rule, single-user curve]");

    py::enum_<cs::ContourSource>(m, "ContourSource")
        .value("H1", cs::ContourSource::kH1)
        .value("NOISE_ONLY", cs::ContourSource::kNoiseOnly)
        .value("NOISELESS", cs::ContourSource::kNoiseless)
        .value("CARRIER", cs::ContourSource::kCarrier);
    m.def("export_csd_contour", &cs::export_csd_contour, py::arg("scenario"), py::arg("path"),
          py::arg("source") = cs::ContourSource::kH1);
}
