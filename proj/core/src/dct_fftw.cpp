#include "dct_fftw.hpp"

#include <fftw3.h>

#include <mutex>

namespace specfilt::detail {

namespace {

// FFTW's planner mutates global state; plan creation and destruction must be
// serialized. Execution on distinct buffers is safe concurrently.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

class PlanGuard {
public:
    explicit PlanGuard(fftw_plan plan) : plan_(plan) {}
    ~PlanGuard() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    PlanGuard(const PlanGuard&) = delete;
    PlanGuard& operator=(const PlanGuard&) = delete;

    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

void fftw_forward(const std::vector<double>& in, std::size_t n, std::size_t d,
                  std::vector<double>& out) {
    out.assign(d * n, 0.0);
    std::vector<double> input = in;  // FFTW wants non-const buffers

    const int ni = static_cast<int>(n);
    const int nd = static_cast<int>(d);
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        fftw_r2r_kind kind = FFTW_REDFT10;
        // Channel j is the strided column j of the token-major input; its
        // spectrum is the contiguous row j of the output.
        plan = fftw_plan_many_r2r(1, &ni, nd,
                                  input.data(), nullptr, nd, 1,
                                  out.data(), nullptr, 1, ni,
                                  &kind, FFTW_ESTIMATE);
    }
    PlanGuard guard(plan);
    guard.execute();

    // REDFT10 computes twice the coefficient sum.
    for (double& v : out) v *= 0.5;
}

void fftw_inverse(const std::vector<double>& coeffs, std::size_t n, std::size_t d,
                  std::vector<double>& out) {
    out.assign(n * d, 0.0);
    std::vector<double> input = coeffs;

    const int ni = static_cast<int>(n);
    const int nd = static_cast<int>(d);
    fftw_plan plan = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        fftw_r2r_kind kind = FFTW_REDFT01;
        plan = fftw_plan_many_r2r(1, &ni, nd,
                                  input.data(), nullptr, 1, ni,
                                  out.data(), nullptr, nd, 1,
                                  &kind, FFTW_ESTIMATE);
    }
    PlanGuard guard(plan);
    guard.execute();

    // REDFT01 already matches the inverse convention up to the 1/n factor.
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
}

}  // namespace specfilt::detail
