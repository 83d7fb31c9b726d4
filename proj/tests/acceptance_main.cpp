#include <iostream>

#include "staleracer/acceptance.hpp"

int main() {
    const auto results = staleracer::run_acceptance();
    const bool all_pass = staleracer::report_acceptance(results, std::cout);
    return all_pass ? 0 : 1;
}
