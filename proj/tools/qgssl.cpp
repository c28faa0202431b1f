// Copyright 2026 The qgssl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: run, sweep, tune, rb, report.

#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "qgssl/harness.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Graph-based semi-supervised learning with quantum-state diagnostics"};
  app.require_subcommand(1);

  std::string config;
  std::string seeds;
  std::string out;

  auto overrides = [&]() {
    qgssl::RunOverrides o;
    if (!seeds.empty()) o.seeds = qgssl::parse_seed_list(seeds);
    if (!out.empty()) o.out = out;
    return o;
  };

  auto* run = app.add_subcommand("run", "Run a configured experiment over its seed list");
  run->add_option("--config", config, "Experiment config JSON")->required();
  run->add_option("--seeds", seeds, "Seed list override, e.g. 0-9 or 1,2,3");
  run->add_option("--out", out, "Results root (default: config output_dir)");

  std::string knob;
  std::string values;
  double sweep_noise = 0.02;
  auto* sweep = app.add_subcommand("sweep", "Sweep layers or qubits (entanglement, accuracy, RB)");
  sweep->add_option("--config", config, "Experiment config JSON")->required();
  sweep->add_option("--knob", knob, "layers or qubits")->required();
  sweep->add_option("--values", values, "Comma-separated values, e.g. 4,6,8")->required();
  sweep->add_option("--seeds", seeds, "Seed list override");
  sweep->add_option("--noise", sweep_noise, "Pauli noise probability for rb_score");
  sweep->add_option("--out", out, "Output root");

  std::string grid;
  auto* tune = app.add_subcommand("tune", "Exhaustive hyperparameter grid search");
  tune->add_option("--config", config, "Experiment config JSON")->required();
  tune->add_option("--grid", grid, "Grid JSON (k_neighbors, layers, qubits, alpha1, alpha2)")
      ->required();
  tune->add_option("--seeds", seeds, "Seed list override");
  tune->add_option("--out", out, "Output root");

  qgssl::RbConfig rb;
  std::string lengths;
  std::string rb_out = "results/rb";
  auto* rbcmd = app.add_subcommand("rb", "Randomized benchmarking with Pauli noise");
  rbcmd->add_option("--noise", rb.noise_p, "Pauli error probability per gate")->capture_default_str();
  rbcmd->add_option("--lengths", lengths, "Comma-separated sequence lengths");
  rbcmd->add_option("--reps", rb.repetitions, "Random sequences per length")->capture_default_str();
  rbcmd->add_option("--shots", rb.shots, "Shots per sequence")->capture_default_str();
  rbcmd->add_option("--seed", rb.seed, "Generator seed")->capture_default_str();
  rbcmd->add_option("--qubits", rb.qubits, "1 or 2")->capture_default_str();
  rbcmd->add_option("--out", rb_out, "Output directory")->capture_default_str();

  std::string results_dir = "results";
  std::string report_out;
  auto* report = app.add_subcommand("report", "Aggregate result.json files into report.csv");
  report->add_option("--results", results_dir, "Results root to scan")->capture_default_str();
  report->add_option("--out", report_out, "Output directory (default: <results>/report)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return qgssl::cli_run(config, overrides(), std::cout, std::cerr);
    if (*sweep) {
      return qgssl::cli_sweep(config, knob, qgssl::parse_int_list(values), overrides(), sweep_noise,
                              std::cout, std::cerr);
    }
    if (*tune) return qgssl::cli_tune(config, grid, overrides(), std::cout, std::cerr);
    if (*rbcmd) {
      if (!lengths.empty()) rb.lengths = qgssl::parse_int_list(lengths);
      return qgssl::cli_rb(rb, rb_out, std::cout, std::cerr);
    }
    if (*report) {
      const std::string dest = report_out.empty() ? results_dir + "/report" : report_out;
      return qgssl::cli_report(results_dir, dest, std::cout, std::cerr);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
