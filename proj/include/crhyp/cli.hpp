#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "crhyp/types.hpp"

namespace crhyp::cli {

enum class Command { Kernel, Distance, Asympt, Verify, Mc, Table };
enum class Format { Csv, Jsonl };

struct RunConfig {
    Command command = Command::Kernel;
    EvalContext ctx;
    std::vector<double> t{0.5};
    std::vector<double> r{0.0};
    std::vector<double> theta{0.0};
    QuadSpec spec;
    WrapSpec wrap;
    std::string output_path;
    Format format = Format::Csv;

    std::string regime = "general";
    std::string check = "pde";
    double h = 1e-3;
    std::size_t paths = 200000;
    double dt = 1e-3;
    unsigned long long seed = 20240601;
    double r_max = 5.0, theta_max = 5.0;
    std::size_t r_bins = 20, theta_bins = 20;
    std::size_t r_count = 0, theta_count = 0;
};

constexpr int kExitOk = 0;
constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crhyp::cli
