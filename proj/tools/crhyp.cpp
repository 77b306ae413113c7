#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "crhyp/cli.hpp"

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("CRHYP_THREADS")) {
        int k = std::atoi(env);
        if (k > 0) omp_set_num_threads(k);
    }
#endif
    std::vector<std::string> args(argv + 1, argv + argc);
    return crhyp::cli::run(args, std::cout, std::cerr);
}
