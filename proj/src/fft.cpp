#include "fft.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

#include <fftw3.h>

namespace gnv::detail {
namespace {

struct Buffer {
    explicit Buffer(std::size_t n)
        : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data == nullptr) {
            throw std::bad_alloc();
        }
    }
    ~Buffer() { fftw_free(data); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;

    fftw_complex* data;
};

// FFTW planning is not thread-safe; execution with the new-array API is.
class PlanCache {
public:
    fftw_plan get(std::size_t n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) {
            return it->second;
        }
        Buffer in(n);
        Buffer out(n);
        fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), in.data, out.data, FFTW_FORWARD,
                                          FFTW_ESTIMATE);
        plans_.emplace(n, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [n, plan] : plans_) {
            fftw_destroy_plan(plan);
        }
    }

private:
    std::mutex mutex_;
    std::map<std::size_t, fftw_plan> plans_;
};

PlanCache& plan_cache() {
    static PlanCache cache;
    return cache;
}

}  // namespace

std::vector<std::complex<double>> forward_dft(std::span<const std::complex<double>> in) {
    const std::size_t n = in.size();
    if (n == 0) {
        return {};
    }
    fftw_plan plan = plan_cache().get(n);
    Buffer src(n);
    Buffer dst(n);
    for (std::size_t i = 0; i < n; ++i) {
        src.data[i][0] = in[i].real();
        src.data[i][1] = in[i].imag();
    }
    fftw_execute_dft(plan, src.data, dst.data);
    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = {dst.data[i][0], dst.data[i][1]};
    }
    return out;
}

}  // namespace gnv::detail
