#pragma once

#include <string>

namespace staleracer {

// The four parameter-server update disciplines.
//
//   KSync:       wait for the K fastest of P workers, cancel the rest
//   KBatchSync:  wait for the first K mini-batches, finishers keep going
//   KAsync:      update on the K-th gradient push, no cancellation
//   KBatchAsync: update on the K-th mini-batch push, workers never idle
enum class Variant { KSync, KBatchSync, KAsync, KBatchAsync };

std::string variant_name(Variant v);

// parses the canonical names ("k_sync", ...); throws std::invalid_argument
Variant variant_from_name(const std::string& name);

inline bool is_synchronous(Variant v) {
    return v == Variant::KSync || v == Variant::KBatchSync;
}

struct VariantConfig {
    Variant variant;
    int wait_count;        // K: gradients aggregated per update
    int num_workers;       // P
    int minibatch_size;    // samples per stochastic gradient
    double learning_rate;

    // throws std::invalid_argument on the first violated constraint
    void validate() const;
};

}  // namespace staleracer
