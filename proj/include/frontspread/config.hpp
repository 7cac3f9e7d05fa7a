#pragma once

#include "frontspread/evolver.hpp"
#include "frontspread/field.hpp"
#include "frontspread/growth.hpp"
#include "frontspread/kernel.hpp"

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>

namespace frontspread {

struct KernelSpec {
    std::string family = "triangular"; // triangular | gaussian | tabulated
    double sigma = 1.0;
    double cutoff = 6.0; // gaussian truncation radius (absolute)
    std::string path;    // CSV of (x, J(x)) rows for tabulated kernels
};

struct ModelSpec {
    std::string kind = "competition"; // competition | predator_prey
    double a1 = 1, b1 = 1, c1 = 0.5;
    double a2 = 1, b2 = 1, c2 = 0.5;
};

struct SolverSpec {
    double d1 = 1, d2 = 1;
    double mu1 = 1, mu2 = 1;
    double dt = 0; // 0 = auto from the contraction bound
    double picard_tol = 1e-12;
    int picard_max_iters = 400;
    double t_final = 20;
    std::string conv_path = "auto"; // auto | direct | fft | serial
    double undershoot_limit = 1e-12;
};

struct GridSpec {
    double dx = 0.05;
    double half_width = 0; // 0 = auto: h0 + (mu1 A1 + mu2 A2) t_final + support
};

struct InitialSpec {
    std::string profile = "cosine"; // cosine | parabola | tent | csv
    double amplitude1 = 0.8, amplitude2 = 0.8;
    double h0 = 1.0;
    std::string csv; // (x, u1, u2) rows when profile = csv
};

struct OutputSpec {
    std::string dir = "out";
    int snapshot_every = 0;
};

struct EigenSpec {
    double d = 1.0, theta = 0.5;
    double a = 0.0, b = 2.0;
    int n_eig = 512;
};

struct CriticalLengthSpec {
    double tol = 1e-3;
    int n_eig = 512;
};

struct MuSweepSpec {
    double mu_lo = 1e-3, mu_hi = 1e3;
    int budget = 12;
    double target_ratio = 2.0;
    double t_final_cap = 0; // 0 = no retries with extended horizon
};

struct AsymptoticsSpec {
    int n_iters = 50;
};

struct VerifySpec {
    std::string level = "quick"; // quick | full
};

struct ClassifySpec {
    double vanish_tol = 1e-3;
    double speed_tol = 1e-4;
    double range_frac = 0.05;
    double window_frac = 0.10;
};

struct ExperimentConfig {
    int schema_version = 1;
    std::string kind = "simulate";
    KernelSpec kernel1, kernel2;
    bool kernel2_given = false;
    ModelSpec model;
    SolverSpec solver;
    GridSpec grid;
    InitialSpec initial;
    OutputSpec outputs;
    EigenSpec eigen;
    CriticalLengthSpec critical_length;
    MuSweepSpec mu_sweep;
    AsymptoticsSpec asymptotics;
    VerifySpec verify;
    ClassifySpec classify;
    std::string source_path;

    nlohmann::json resolved() const; // defaults-filled echo of every field
};

ExperimentConfig parse_config(const nlohmann::json &j);
ExperimentConfig load_config(const std::string &path);

/// Builders from the validated specs.
Kernel make_kernel(const KernelSpec &spec, double table_spacing);
GrowthModel make_model(const ModelSpec &spec);
SolverConfig make_solver(const SolverSpec &spec, int snapshot_every);
std::pair<std::function<double(double)>, std::function<double(double)>>
make_profiles(const InitialSpec &spec);
/// Ambient sizing: explicit override, or h0 + (mu1 A1 + mu2 A2) t_final plus
/// one kernel support of margin.
Grid make_grid(const ExperimentConfig &cfg);

} // namespace frontspread
