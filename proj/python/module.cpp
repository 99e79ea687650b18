#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "d2dcoop/cli.hpp"
#include "d2dcoop/config.hpp"
#include "d2dcoop/counting.hpp"
#include "d2dcoop/geometry.hpp"
#include "d2dcoop/optimizer.hpp"

namespace py = pybind11;
using namespace d2dcoop;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Cache-enabled D2D network toolkit: closed-form analytics plus a "
            "Monte Carlo engine";

  py::class_<PopularityModel>(m, "PopularityModel")
      .def_static("make", &PopularityModel::make, py::arg("catalog_size"),
                  py::arg("cache_size"), py::arg("zipf_beta"))
      .def_readonly("catalog_size", &PopularityModel::catalog_size)
      .def_readonly("cache_size", &PopularityModel::cache_size)
      .def_readonly("zipf_beta", &PopularityModel::zipf_beta)
      .def_readonly("group_count", &PopularityModel::group_count)
      .def_readonly("pmf", &PopularityModel::pmf)
      .def_readonly("group_probs", &PopularityModel::group_probs);

  py::class_<ClusterConfig>(m, "ClusterConfig")
      .def_static("make", &ClusterConfig::make, py::arg("total_users"),
                  py::arg("users_per_cluster"))
      .def_readonly("total_users", &ClusterConfig::total_users)
      .def_readonly("users_per_cluster", &ClusterConfig::users_per_cluster)
      .def_readonly("cluster_count", &ClusterConfig::cluster_count);

  m.def("zipf_pmf", &zipf_pmf, py::arg("file_index"), py::arg("model"));
  m.def("group_prob", &group_prob, py::arg("group_index"), py::arg("model"));
  m.def("hit_prob", &hit_prob, py::arg("group_index"), py::arg("users_per_cluster"),
        py::arg("model"));
  m.def("coop_prob", &coop_prob, py::arg("cfg"), py::arg("model"));
  m.def("avg_active_coop", &avg_active_coop, py::arg("cfg"), py::arg("model"));
  m.def("avg_cellular_users", &avg_cellular_users, py::arg("cfg"), py::arg("model"));

  m.def("intra_pdf", &intra_pdf, py::arg("r"));
  m.def("inter_pdf", &inter_pdf, py::arg("r"));
  m.def("q1", &q1, py::arg("alpha"), py::arg("r_min"));
  m.def("q2", &q2, py::arg("alpha"), py::arg("r_min"));

  py::enum_<PathLoss>(m, "PathLoss")
      .value("powerlaw", PathLoss::powerlaw)
      .value("logdistance", PathLoss::logdistance);

  py::class_<RadioScenario>(m, "RadioScenario")
      .def_static("make", &RadioScenario::make, py::arg("hotspot_side_m"),
                  py::arg("tx_power_dbm"), py::arg("noise_dbm"), py::arg("bandwidth_hz"),
                  py::arg("model"), py::arg("alpha"), py::arg("min_distance_m"))
      .def_readonly("tx_power_w", &RadioScenario::tx_power_w)
      .def_readonly("noise_w", &RadioScenario::noise_w)
      .def_readonly("alpha", &RadioScenario::alpha)
      .def_readonly("gain_const", &RadioScenario::gain_const);

  py::class_<RadioConfig>(m, "RadioConfig")
      .def_readonly("tx_power_w", &RadioConfig::tx_power_w)
      .def_readonly("noise_w", &RadioConfig::noise_w)
      .def_readonly("bandwidth_hz", &RadioConfig::bandwidth_hz)
      .def_readonly("alpha", &RadioConfig::alpha)
      .def_readonly("cell_side_m", &RadioConfig::cell_side_m)
      .def_readonly("cluster_count", &RadioConfig::cluster_count)
      .def("r_min", &RadioConfig::r_min);

  m.def("radio_for", &radio_for, py::arg("scenario"), py::arg("cluster_count"));
  m.def("ncoop_spectral_efficiency", &ncoop_spectral_efficiency, py::arg("radio"));
  m.def("coop_spectral_efficiency", &coop_spectral_efficiency, py::arg("radio"));
  m.def("mean_interference", &mean_interference, py::arg("radio"));
  m.def("prop4_condition", &prop4_condition, py::arg("radio"));
  m.def("network_throughput", &network_throughput, py::arg("radio"), py::arg("eta"),
        py::arg("coop_prob"), py::arg("coop_se"), py::arg("ncoop_se"));
  m.def(
      "user_rates",
      [](const RadioConfig& r, double eta, double nc, double nn, double cse,
         double nse) {
        const UserRates u = user_rates(r, eta, nc, nn, cse, nse);
        return py::make_tuple(u.coop_user_rate_bps, u.ncoop_user_rate_bps);
      },
      py::arg("radio"), py::arg("eta"), py::arg("avg_coop_users"),
      py::arg("avg_ncoop_users"), py::arg("coop_se"), py::arg("ncoop_se"));

  m.def("exact_avg_coop", &exact_avg_coop, py::arg("cfg"), py::arg("model"));
  m.def("approx_avg_coop", &approx_avg_coop, py::arg("cfg"), py::arg("model"));
  m.def("enumerate_avg_coop", &enumerate_avg_coop, py::arg("cfg"), py::arg("model"),
        py::arg("state_budget") = 100000000ull);
  m.def("avg_ncoop", &avg_ncoop, py::arg("cfg"), py::arg("model"));

  py::class_<EtaResult>(m, "EtaResult")
      .def_readonly("feasible", &EtaResult::feasible)
      .def_readonly("eta", &EtaResult::eta)
      .def_readonly("lower", &EtaResult::lower)
      .def_readonly("upper", &EtaResult::upper);

  py::class_<PerKEntry>(m, "PerKEntry")
      .def_readonly("users_per_cluster", &PerKEntry::users_per_cluster)
      .def_readonly("cluster_count", &PerKEntry::cluster_count)
      .def_readonly("eta_star", &PerKEntry::eta_star)
      .def_readonly("feasible", &PerKEntry::feasible)
      .def_readonly("throughput_bps", &PerKEntry::throughput_bps)
      .def_readonly("coop_prob", &PerKEntry::coop_prob)
      .def_readonly("avg_coop_users", &PerKEntry::avg_coop_users)
      .def_readonly("avg_ncoop_users", &PerKEntry::avg_ncoop_users);

  py::class_<OptimizationResult>(m, "OptimizationResult")
      .def_readonly("feasible", &OptimizationResult::feasible)
      .def_readonly("best_K", &OptimizationResult::best_K)
      .def_readonly("best_eta", &OptimizationResult::best_eta)
      .def_readonly("best_throughput_bps", &OptimizationResult::best_throughput_bps)
      .def_readonly("table", &OptimizationResult::table);

  m.def("eta_star", &eta_star, py::arg("users_per_cluster"), py::arg("model"),
        py::arg("scenario"), py::arg("rate_floor_bps"), py::arg("total_users"));
  m.def("optimize", &optimize, py::arg("model"), py::arg("scenario"),
        py::arg("rate_floor_bps"), py::arg("total_users"));

  py::enum_<CoopSinrMode>(m, "CoopSinrMode")
      .value("zf_exact", CoopSinrMode::zf_exact)
      .value("paper_approx", CoopSinrMode::paper_approx);

  py::class_<SimParams>(m, "SimParams")
      .def(py::init<>())
      .def_readwrite("drops", &SimParams::drops)
      .def_readwrite("fading_draws", &SimParams::fading_draws)
      .def_readwrite("seed", &SimParams::seed)
      .def_readwrite("eta", &SimParams::eta)
      .def_readwrite("coop_mode", &SimParams::coop_mode)
      .def_readwrite("coop_min_clusters", &SimParams::coop_min_clusters)
      .def_readwrite("cooperation", &SimParams::cooperation)
      .def_readwrite("threads", &SimParams::threads);

  py::class_<SimReport>(m, "SimReport")
      .def_readonly("drops", &SimReport::drops)
      .def_readonly("batches", &SimReport::batches)
      .def_readonly("mean_throughput_bps", &SimReport::mean_throughput_bps)
      .def_readonly("throughput_ci_bps", &SimReport::throughput_ci_bps)
      .def_readonly("coop_user_rate_bps", &SimReport::coop_user_rate_bps)
      .def_readonly("ncoop_user_rate_bps", &SimReport::ncoop_user_rate_bps)
      .def_readonly("coop_user_rate_mode1_bps", &SimReport::coop_user_rate_mode1_bps)
      .def_readonly("ncoop_user_rate_mode1_bps", &SimReport::ncoop_user_rate_mode1_bps)
      .def_readonly("pc", &SimReport::pc)
      .def_readonly("na", &SimReport::na)
      .def_readonly("nc", &SimReport::nc)
      .def_readonly("nn", &SimReport::nn)
      .def_readonly("nb", &SimReport::nb)
      .def_readonly("rejected_fading_draws", &SimReport::rejected_fading_draws)
      .def_readonly("excluded_coop_slots", &SimReport::excluded_coop_slots);

  py::class_<CountStats>(m, "CountStats")
      .def_readonly("pc", &CountStats::pc)
      .def_readonly("pc_se", &CountStats::pc_se)
      .def_readonly("na", &CountStats::na)
      .def_readonly("nc", &CountStats::nc)
      .def_readonly("nc_se", &CountStats::nc_se)
      .def_readonly("nn", &CountStats::nn)
      .def_readonly("nb", &CountStats::nb);

  m.def("run", &run, py::arg("model"), py::arg("cfg"), py::arg("scenario"),
        py::arg("params"), py::call_guard<py::gil_scoped_release>());
  m.def("run_baseline_tdma", &run_baseline_tdma, py::arg("model"), py::arg("cfg"),
        py::arg("scenario"), py::arg("params"),
        py::call_guard<py::gil_scoped_release>());
  m.def("run_partial_coop", &run_partial_coop, py::arg("model"), py::arg("cfg"),
        py::arg("scenario"), py::arg("params"), py::arg("coop_min_clusters"),
        py::call_guard<py::gil_scoped_release>());
  m.def("sample_request_counts", &sample_request_counts, py::arg("model"),
        py::arg("cfg"), py::arg("draws"), py::arg("seed"),
        py::arg("coop_min_clusters") = 0, py::call_guard<py::gil_scoped_release>());
  m.def("mc_ncoop_se", &mc_ncoop_se, py::arg("radio"), py::arg("samples"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "mc_coop_se",
      [](const RadioConfig& r, int clusters, CoopSinrMode mode, long samples,
         std::uint64_t seed) { return mc_coop_se(r, clusters, mode, samples, seed); },
      py::arg("radio"), py::arg("clusters"), py::arg("mode"), py::arg("samples"),
      py::arg("seed"), py::call_guard<py::gil_scoped_release>());

  py::register_exception<ConfigError>(m, "ConfigError");
  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("zipf_beta", &SystemConfig::zipf_beta)
      .def_readwrite("num_users", &SystemConfig::num_users)
      .def_readwrite("drops", &SystemConfig::drops)
      .def_readwrite("seed", &SystemConfig::seed);
  m.def("parse_config", &parse_config, py::arg("path"));
  m.def("popularity_from", &popularity_from, py::arg("cfg"));
  m.def("scenario_from", &scenario_from, py::arg("cfg"));
  m.def(
      "simulate_csv",
      [](const SystemConfig& cfg) {
        std::ostringstream out;
        const int status = cmd_simulate(cfg, out);
        return py::make_tuple(status, out.str());
      },
      py::arg("cfg"));
}
