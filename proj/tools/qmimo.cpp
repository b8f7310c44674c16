// Command-line front end: achievable-rate calculations, one-shot baselines,
// Monte Carlo link simulation, and SNR sweeps, emitted as CSV or JSON.

#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmimo/io.hpp"
#include "qmimo/mcsim.hpp"
#include "qmimo/ratecalc.hpp"

using nlohmann::json;

namespace {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void write_output(const std::string& out_path, const std::string& format,
                  const ConfigEcho& config, const std::vector<std::string>& columns,
                  const std::vector<std::vector<std::string>>& rows,
                  const json& extra = json::object()) {
  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file: " + out_path);
    os = &file;
  }
  if (format == "csv") {
    for (const auto& [k, v] : config) *os << "# " << k << "=" << v << "\n";
    for (std::size_t c = 0; c < columns.size(); ++c)
      *os << columns[c] << (c + 1 < columns.size() ? "," : "\n");
    for (const auto& row : rows)
      for (std::size_t c = 0; c < row.size(); ++c)
        *os << row[c] << (c + 1 < row.size() ? "," : "\n");
  } else {
    json j;
    json cfg = json::object();
    for (const auto& [k, v] : config) cfg[k] = v;
    j["config"] = cfg;
    j["columns"] = columns;
    json data = json::array();
    for (const auto& row : rows) {
      json obj = json::object();
      for (std::size_t c = 0; c < row.size(); ++c) obj[columns[c]] = row[c];
      data.push_back(obj);
    }
    j["rows"] = data;
    for (auto it = extra.begin(); it != extra.end(); ++it) j[it.key()] = it.value();
    *os << j.dump(2) << "\n";
  }
}

std::vector<std::string> ptp_columns(std::size_t s) {
  std::vector<std::string> cols{"snr_db", "rate_quantized", "rate_continuous"};
  for (std::size_t k = 1; k <= s; ++k) {
    cols.push_back("bits" + std::to_string(k));
    cols.push_back("power" + std::to_string(k));
    cols.push_back("mi" + std::to_string(k));
  }
  return cols;
}

std::vector<std::string> ptp_row(double snr_db, const qmimo::PtpRateResult& r) {
  std::vector<std::string> row{qmimo::format_real(snr_db),
                               qmimo::format_real(r.rate_quantized),
                               qmimo::format_real(r.rate_continuous)};
  for (std::size_t k = 0; k < r.best_allocation.bits.size(); ++k) {
    row.push_back(std::to_string(r.best_allocation.bits[k]));
    row.push_back(qmimo::format_real(r.best_allocation.powers[k]));
    row.push_back(qmimo::format_real(r.per_subchannel_mi[k]));
  }
  return row;
}

std::vector<double> snr_grid(double start_db, double stop_db, double step_db) {
  if (step_db <= 0.0) throw std::runtime_error("sweep: --snr-step must be > 0");
  if (stop_db < start_db) throw std::runtime_error("sweep: --snr-stop < --snr-start");
  std::vector<double> grid;
  for (double v = start_db; v <= stop_db + 1e-9; v += step_db) grid.push_back(v);
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"One-bit-ADC MIMO rate laboratory"};
  app.require_subcommand(1);

  std::string channel_path, channel2_path, out_path, format = "csv", mode = "ptp";
  unsigned nq = 1, nq1 = 1, nq2 = 1, example = 1;
  double snr_db = 0.0, snr_start = 0.0, snr_stop = 0.0, snr_step = 1.0;
  double epsilon = 0.01;
  std::uint64_t seed = 1;
  std::size_t symbols = 100000;
  std::string sweep_command = "ptp-rate";

  auto add_output_flags = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "Output path (default stdout)");
    cmd->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}));
  };

  auto* ptp = app.add_subcommand("ptp-rate", "Point-to-point achievable rate");
  ptp->add_option("--channel", channel_path, "Channel JSON file")->required();
  ptp->add_option("--nq", nq, "Total one-bit ADC budget")->required();
  ptp->add_option("--snr-db", snr_db, "Transmit power in dB")->required();
  ptp->add_option("--seed", seed, "Seed (echoed for provenance)");
  add_output_flags(ptp);

  auto* bc = app.add_subcommand("bc-region", "Two-user broadcast rate region");
  bc->add_option("--channel1", channel_path, "User 1 channel JSON file")->required();
  bc->add_option("--channel2", channel2_path, "User 2 channel JSON file")->required();
  bc->add_option("--nq1", nq1, "ADC budget of user 1")->required();
  bc->add_option("--nq2", nq2, "ADC budget of user 2")->required();
  bc->add_option("--snr-db", snr_db, "Transmit power in dB")->required();
  add_output_flags(bc);

  auto* oneshot = app.add_subcommand("one-shot", "One-shot baseline examples");
  oneshot->add_option("--example", example, "Scenario (1 or 2)")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  oneshot->add_option("--snr-db", snr_db, "Transmit power in dB")->required();
  oneshot->add_option("--epsilon", epsilon, "Threshold offset for example 2");
  add_output_flags(oneshot);

  auto* sim = app.add_subcommand("simulate", "Monte Carlo link simulation");
  sim->add_option("--mode", mode, "ptp, bc-user1, or bc-user2")
      ->check(CLI::IsMember({"ptp", "bc-user1", "bc-user2"}));
  sim->add_option("--channel", channel_path, "Channel JSON file")->required();
  sim->add_option("--nq", nq, "ADC budget for the simulated link")->required();
  sim->add_option("--snr-db", snr_db, "Transmit power in dB")->required();
  sim->add_option("--symbols", symbols, "Number of transmitted symbols");
  sim->add_option("--seed", seed, "RNG seed");
  add_output_flags(sim);

  auto* sweep = app.add_subcommand("sweep", "SNR sweep of another command");
  sweep->add_option("--command", sweep_command, "Command to sweep")
      ->check(CLI::IsMember({"ptp-rate", "bc-region", "one-shot"}));
  sweep->add_option("--snr-start", snr_start, "Sweep start in dB")->required();
  sweep->add_option("--snr-stop", snr_stop, "Sweep stop in dB")->required();
  sweep->add_option("--snr-step", snr_step, "Sweep step in dB");
  sweep->add_option("--channel", channel_path, "Channel JSON file (ptp-rate)");
  sweep->add_option("--channel1", channel_path, "User 1 channel (bc-region)");
  sweep->add_option("--channel2", channel2_path, "User 2 channel (bc-region)");
  sweep->add_option("--nq", nq, "ADC budget (ptp-rate)");
  sweep->add_option("--nq1", nq1, "ADC budget of user 1");
  sweep->add_option("--nq2", nq2, "ADC budget of user 2");
  sweep->add_option("--example", example, "One-shot scenario");
  sweep->add_option("--epsilon", epsilon, "Threshold offset for example 2");
  add_output_flags(sweep);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ptp->parsed()) {
      const qmimo::Matrix h = qmimo::parse_channel_file(channel_path);
      const auto r = qmimo::theorem1_rate(h, nq, qmimo::db_to_linear(snr_db));
      ConfigEcho cfg{{"command", "ptp-rate"},
                     {"channel", channel_path},
                     {"nq", std::to_string(nq)},
                     {"snr_db", qmimo::format_real(snr_db)},
                     {"seed", std::to_string(seed)}};
      write_output(out_path, format, cfg, ptp_columns(r.best_allocation.bits.size()),
                   {ptp_row(snr_db, r)});
    } else if (bc->parsed()) {
      const qmimo::Matrix h1 = qmimo::parse_channel_file(channel_path);
      const qmimo::Matrix h2 = qmimo::parse_channel_file(channel2_path);
      const auto region =
          qmimo::theorem2_region(h1, h2, nq1, nq2, qmimo::db_to_linear(snr_db));
      ConfigEcho cfg{{"command", "bc-region"}, {"channel1", channel_path},
                     {"channel2", channel2_path}, {"nq1", std::to_string(nq1)},
                     {"nq2", std::to_string(nq2)}, {"snr_db", qmimo::format_real(snr_db)}};
      json extra;
      json verts = json::array();
      for (const auto& p : region.vertices)
        verts.push_back({qmimo::format_real(p.x), qmimo::format_real(p.y)});
      extra["vertices"] = verts;
      write_output(out_path, format, cfg, {"snr_db", "r1_max", "r2_max"},
                   {{qmimo::format_real(snr_db), qmimo::format_real(region.r1_max),
                     qmimo::format_real(region.r2_max)}},
                   extra);
    } else if (oneshot->parsed()) {
      const double p = qmimo::db_to_linear(snr_db);
      ConfigEcho cfg{{"command", "one-shot"},
                     {"example", std::to_string(example)},
                     {"snr_db", qmimo::format_real(snr_db)},
                     {"epsilon", qmimo::format_real(epsilon)}};
      if (example == 1) {
        write_output(out_path, format, cfg, {"snr_db", "rate"},
                     {{qmimo::format_real(snr_db),
                       qmimo::format_real(qmimo::one_shot_rate_example1_optimized(p))}});
      } else {
        write_output(out_path, format, cfg,
                     {"snr_db", "sumrate_epsilon", "sumrate_zero"},
                     {{qmimo::format_real(snr_db),
                       qmimo::format_real(qmimo::one_shot_sumrate_example2(p, epsilon)),
                       qmimo::format_real(qmimo::one_shot_sumrate_example2_zero(p))}});
      }
    } else if (sim->parsed()) {
      const qmimo::Matrix h = qmimo::parse_channel_file(channel_path);
      const double p = qmimo::db_to_linear(snr_db);
      qmimo::SimConfig sc;
      sc.channel = h;
      sc.power = p;
      sc.num_symbols = symbols;
      sc.seed = seed;
      qmimo::SimReport report;
      if (mode == "ptp") {
        sc.mode = qmimo::SimMode::ptp;
        sc.allocation = qmimo::theorem1_rate(h, nq, p).best_allocation;
        report = qmimo::run_ptp_sim(sc);
      } else {
        sc.mode = mode == "bc-user1" ? qmimo::SimMode::bc_user1 : qmimo::SimMode::bc_user2;
        sc.allocation = qmimo::bc_user_best(h, nq, p).allocation;
        report = qmimo::run_bc_sim(sc);
      }
      ConfigEcho cfg{{"command", "simulate"},      {"mode", mode},
                     {"channel", channel_path},    {"nq", std::to_string(nq)},
                     {"snr_db", qmimo::format_real(snr_db)},
                     {"symbols", std::to_string(symbols)},
                     {"seed", std::to_string(seed)}};
      std::vector<std::string> cols{"snr_db", "empirical_rate"};
      std::vector<std::string> row{qmimo::format_real(snr_db),
                                   qmimo::format_real(report.empirical_rate)};
      for (std::size_t k = 0; k < report.analytic_mi.size(); ++k) {
        const std::string idx = std::to_string(k + 1);
        cols.insert(cols.end(), {"bits" + idx, "power" + idx, "empirical_mi" + idx,
                                 "analytic_mi" + idx, "ser" + idx});
        row.push_back(std::to_string(sc.allocation.bits[k]));
        row.push_back(qmimo::format_real(sc.allocation.powers[k]));
        row.push_back(qmimo::format_real(report.empirical_mi_per_subchannel[k]));
        row.push_back(qmimo::format_real(report.analytic_mi[k]));
        row.push_back(qmimo::format_real(report.symbol_error_rate[k]));
      }
      write_output(out_path, format, cfg, cols, {row});
    } else if (sweep->parsed()) {
      const std::vector<double> grid = snr_grid(snr_start, snr_stop, snr_step);
      ConfigEcho cfg{{"command", "sweep"},
                     {"sweep_command", sweep_command},
                     {"snr_start", qmimo::format_real(snr_start)},
                     {"snr_stop", qmimo::format_real(snr_stop)},
                     {"snr_step", qmimo::format_real(snr_step)}};
      if (sweep_command == "ptp-rate") {
        if (channel_path.empty()) throw std::runtime_error("sweep ptp-rate: --channel required");
        const qmimo::Matrix h = qmimo::parse_channel_file(channel_path);
        cfg.push_back({"channel", channel_path});
        cfg.push_back({"nq", std::to_string(nq)});
        std::vector<std::vector<std::string>> rows;
        std::size_t s = 0;
        for (double db : grid) {
          const auto r = qmimo::theorem1_rate(h, nq, qmimo::db_to_linear(db));
          s = r.best_allocation.bits.size();
          rows.push_back(ptp_row(db, r));
        }
        write_output(out_path, format, cfg, ptp_columns(s), rows);
      } else if (sweep_command == "bc-region") {
        if (channel_path.empty() || channel2_path.empty())
          throw std::runtime_error("sweep bc-region: --channel1 and --channel2 required");
        const qmimo::Matrix h1 = qmimo::parse_channel_file(channel_path);
        const qmimo::Matrix h2 = qmimo::parse_channel_file(channel2_path);
        cfg.push_back({"channel1", channel_path});
        cfg.push_back({"channel2", channel2_path});
        cfg.push_back({"nq1", std::to_string(nq1)});
        cfg.push_back({"nq2", std::to_string(nq2)});
        std::vector<std::vector<std::string>> rows;
        for (double db : grid) {
          const auto region =
              qmimo::theorem2_region(h1, h2, nq1, nq2, qmimo::db_to_linear(db));
          rows.push_back({qmimo::format_real(db), qmimo::format_real(region.r1_max),
                          qmimo::format_real(region.r2_max)});
        }
        write_output(out_path, format, cfg, {"snr_db", "r1_max", "r2_max"}, rows);
      } else {
        cfg.push_back({"example", std::to_string(example)});
        cfg.push_back({"epsilon", qmimo::format_real(epsilon)});
        std::vector<std::vector<std::string>> rows;
        for (double db : grid) {
          const double p = qmimo::db_to_linear(db);
          if (example == 1)
            rows.push_back({qmimo::format_real(db),
                            qmimo::format_real(qmimo::one_shot_rate_example1_optimized(p))});
          else
            rows.push_back({qmimo::format_real(db),
                            qmimo::format_real(qmimo::one_shot_sumrate_example2(p, epsilon)),
                            qmimo::format_real(qmimo::one_shot_sumrate_example2_zero(p))});
        }
        write_output(out_path, format, cfg,
                     example == 1
                         ? std::vector<std::string>{"snr_db", "rate"}
                         : std::vector<std::string>{"snr_db", "sumrate_epsilon",
                                                    "sumrate_zero"},
                     rows);
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
