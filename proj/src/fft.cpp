#include "llspec/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace llspec::fft {
namespace {

// FFTW planning is not thread safe; execution of a plan on its own buffer is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Plan {
    int n = 0;
    fftw_complex* buf = nullptr;
    fftw_plan plan = nullptr;

    Plan(int n_, int sign) : n(n_) {
        std::lock_guard<std::mutex> lock(planner_mutex());
        buf = fftw_alloc_complex(static_cast<size_t>(n));
        plan = fftw_plan_dft_1d(n, buf, buf, sign, FFTW_ESTIMATE);
    }
    ~Plan() {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
        fftw_free(buf);
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
};

Plan& plan_for(int n, int sign) {
    thread_local std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
    auto& p = cache[{n, sign}];
    if (!p) p = std::make_unique<Plan>(n, sign);
    return *p;
}

void run(cvec& a, int sign) {
    if (a.empty()) return;
    Plan& p = plan_for(static_cast<int>(a.size()), sign);
    std::memcpy(p.buf, a.data(), a.size() * sizeof(fftw_complex));
    fftw_execute(p.plan);
    std::memcpy(static_cast<void*>(a.data()), p.buf, a.size() * sizeof(fftw_complex));
}

}  // namespace

void forward(cvec& a) { run(a, FFTW_FORWARD); }
void backward(cvec& a) { run(a, FFTW_BACKWARD); }

}  // namespace llspec::fft
