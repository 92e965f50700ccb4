#include "cgoscat/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace cgoscat::fftw {
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex plan_mutex;
std::map<std::tuple<int, int, int>, PlanPair>& plan_cache() {
    static std::map<std::tuple<int, int, int>, PlanPair> cache;
    return cache;
}

// Plans are measured on a scratch buffer with FFTW_UNALIGNED so they can be
// executed on any caller-owned storage afterwards.
PlanPair& plans_for(int n0, int n1, int n2) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_tuple(n0, n1, n2);
    auto& cache = plan_cache();
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    std::size_t count = static_cast<std::size_t>(n0) * (n1 > 0 ? n1 : 1) * (n2 > 0 ? n2 : 1);
    std::vector<Complex> scratch(count);
    auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
    unsigned flags = FFTW_MEASURE | FFTW_UNALIGNED;

    PlanPair p;
    if (n2 > 0) {
        p.fwd = fftw_plan_dft_3d(n0, n1, n2, buf, buf, FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft_3d(n0, n1, n2, buf, buf, FFTW_BACKWARD, flags);
    } else if (n1 > 0) {
        p.fwd = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft_2d(n0, n1, buf, buf, FFTW_BACKWARD, flags);
    } else {
        p.fwd = fftw_plan_dft_1d(n0, buf, buf, FFTW_FORWARD, flags);
        p.bwd = fftw_plan_dft_1d(n0, buf, buf, FFTW_BACKWARD, flags);
    }
    return cache.emplace(key, p).first->second;
}

void run(fftw_plan plan, Complex* data) {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(plan, buf, buf);
}

}  // namespace

void forward3d(int n, Complex* data) { run(plans_for(n, n, n).fwd, data); }
void backward3d(int n, Complex* data) { run(plans_for(n, n, n).bwd, data); }
void forward2d(int n0, int n1, Complex* data) { run(plans_for(n0, n1, 0).fwd, data); }
void backward2d(int n0, int n1, Complex* data) { run(plans_for(n0, n1, 0).bwd, data); }
void forward1d(int n, Complex* data) { run(plans_for(n, 0, 0).fwd, data); }
void backward1d(int n, Complex* data) { run(plans_for(n, 0, 0).bwd, data); }

}  // namespace cgoscat::fftw
