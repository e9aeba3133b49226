// Backend selection. Resolved once, before any numerics run, so one process
// never mixes rounding behaviors mid-run.
#include "spinwell/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace spinwell::kern {
namespace {

std::atomic<const Ops*> g_active{nullptr};

const Ops* resolve_auto() {
    if (const Ops* a = avx2_ops())
        return a;
    return &scalar_ops();
}

const Ops* resolve_from_env() {
    const char* env = std::getenv("SPINWELL_SIMD");
    if (env != nullptr) {
        const std::string_view want{env};
        if (want == "scalar")
            return &scalar_ops();
        if (want == "avx2") {
            if (const Ops* a = avx2_ops())
                return a;
            // Requested backend unavailable: fall through to auto rather than
            // silently running nothing.
        }
    }
    return resolve_auto();
}

} // namespace

const Ops& ops() {
    const Ops* t = g_active.load(std::memory_order_acquire);
    if (t == nullptr) {
        t = resolve_from_env();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

bool select_backend(std::string_view name) {
    if (name == "scalar") {
        g_active.store(&scalar_ops(), std::memory_order_release);
        return true;
    }
    if (name == "avx2") {
        if (const Ops* a = avx2_ops()) {
            g_active.store(a, std::memory_order_release);
            return true;
        }
        return false;
    }
    if (name == "auto") {
        g_active.store(resolve_auto(), std::memory_order_release);
        return true;
    }
    return false;
}

} // namespace spinwell::kern
