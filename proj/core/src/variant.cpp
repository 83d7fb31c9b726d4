#include "staleracer/variant.hpp"

#include <stdexcept>

namespace staleracer {

namespace {
constexpr int kMaxWorkers = 64;  // supported desk-scale range
}

std::string variant_name(Variant v) {
    switch (v) {
        case Variant::KSync: return "k_sync";
        case Variant::KBatchSync: return "k_batch_sync";
        case Variant::KAsync: return "k_async";
        case Variant::KBatchAsync: return "k_batch_async";
    }
    return "unknown";
}

Variant variant_from_name(const std::string& name) {
    if (name == "k_sync") return Variant::KSync;
    if (name == "k_batch_sync") return Variant::KBatchSync;
    if (name == "k_async") return Variant::KAsync;
    if (name == "k_batch_async") return Variant::KBatchAsync;
    throw std::invalid_argument(
        "unknown variant '" + name +
        "' (expected k_sync, k_batch_sync, k_async or k_batch_async)");
}

void VariantConfig::validate() const {
    if (num_workers < 1 || num_workers > kMaxWorkers)
        throw std::invalid_argument("num_workers must be in [1, 64]");
    if (wait_count < 1 || wait_count > num_workers)
        throw std::invalid_argument("wait_count must be in [1, num_workers]");
    if (minibatch_size < 1) throw std::invalid_argument("minibatch_size must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be > 0");
}

}  // namespace staleracer
