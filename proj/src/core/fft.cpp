#include "chromasim/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

#include "chromasim/common.hpp"

namespace chromasim::fft {
namespace {

// The FFTW planner is not reentrant; execution of distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct Buffer {
    explicit Buffer(std::size_t n)
        : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!ptr) throw std::bad_alloc();
    }
    ~Buffer() { fftw_free(ptr); }
    Buffer(const Buffer&) = delete;
    Buffer& operator=(const Buffer&) = delete;
    fftw_complex* ptr;
};

std::vector<Complex> transform(const std::vector<Complex>& data, int width, int height, int sign) {
    if (width <= 0 || height <= 0) throw DimensionError("FFT dimensions must be positive");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    if (data.size() != n) throw DimensionError("FFT input size does not match dimensions");

    Buffer in(n);
    Buffer out(n);
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_2d(height, width, in.ptr, out.ptr, sign, FFTW_ESTIMATE);
    }
    std::memcpy(in.ptr, data.data(), sizeof(fftw_complex) * n);
    fftw_execute(plan);
    std::vector<Complex> result(n);
    std::memcpy(static_cast<void*>(result.data()), out.ptr, sizeof(fftw_complex) * n);
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return result;
}

}  // namespace

std::vector<Complex> forward_2d(const std::vector<Complex>& data, int width, int height) {
    return transform(data, width, height, FFTW_FORWARD);
}

std::vector<Complex> inverse_2d(const std::vector<Complex>& data, int width, int height) {
    return transform(data, width, height, FFTW_BACKWARD);
}

}  // namespace chromasim::fft
