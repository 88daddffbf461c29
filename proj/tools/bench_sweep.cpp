// Times the serial reference sweep against the OpenMP path and checks that
// both produce byte-identical summaries.
#include <chrono>
#include <iostream>
#include <thread>

#include "lev/harness.hpp"

int main(int argc, char** argv) {
  int workers = static_cast<int>(std::thread::hardware_concurrency());
  if (argc > 1) workers = std::atoi(argv[1]);
  if (workers < 1) workers = 4;

  lev::SweepConfig cfg;
  cfg.learner = lev::LearnerKind::LePrediction;
  cfg.env.kind = lev::EnvKind::FixedVariation;
  cfg.T_grid = {4096};
  cfg.n_grid = {2048};
  cfg.K_grid = {2, 4};
  cfg.eta_grid = {1.0 / 324.0};
  cfg.target_q_grid = {256.0};
  cfg.seeds = 16;
  cfg.workers = workers;

  using clock = std::chrono::steady_clock;

  auto t0 = clock::now();
  lev::SweepResult serial = lev::run_sweep_serial(cfg);
  auto t1 = clock::now();
  lev::SweepResult parallel = lev::run_sweep(cfg);
  auto t2 = clock::now();

  double serial_s = std::chrono::duration<double>(t1 - t0).count();
  double parallel_s = std::chrono::duration<double>(t2 - t1).count();
  std::string csv_serial = lev::summary_csv(serial);
  std::string csv_parallel = lev::summary_csv(parallel);

  std::cout << "cells x seeds: " << serial.cells.size() << " x " << cfg.seeds << "\n";
  std::cout << "serial:   " << serial_s << " s\n";
  std::cout << "parallel: " << parallel_s << " s (" << workers << " workers, speedup "
            << serial_s / parallel_s << "x)\n";
  if (csv_serial != csv_parallel) {
    std::cout << "MISMATCH: serial and parallel summaries differ\n";
    return 1;
  }
  std::cout << "summaries byte-identical\n";
  return 0;
}
