// Compares single-threaded and OpenMP-parallel throughput of the two hot
// paths: table-based code construction and batched Monte-Carlo decoding.
#include <chrono>
#include <cstdio>
#include <string>

#include "abspolar/channel.hpp"
#include "abspolar/construct.hpp"
#include "abspolar/simulate.hpp"

using namespace abspolar;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void set_threads_env(int t) {
#ifdef _WIN32
    (void)t;
#else
    setenv("ABS_POLAR_THREADS", std::to_string(t).c_str(), 1);
#endif
}

}  // namespace

int main(int argc, char** argv) {
    long n = 256;
    std::size_t mu = 4096;
    long trials = 2000;
    if (argc > 1) n = std::atol(argv[1]);
    if (argc > 2) mu = static_cast<std::size_t>(std::atol(argv[2]));
    if (argc > 3) trials = std::atol(argv[3]);

    const int hw = thread_count(0);
    std::printf("benchmark: n=%ld mu=%zu trials=%ld hardware threads=%d\n", n, mu, trials, hw);

    BmsChannel w = make_awgn(2.0, 0.5, 32);

    std::printf("\nconstruction (abs family)\n");
    double serial_s = 0;
    for (int t : {1, hw}) {
        set_threads_env(t);
        auto t0 = std::chrono::steady_clock::now();
        auto res = construct(n, n / 2, w, mu, CodeFamily::abs);
        double dt = seconds_since(t0);
        if (t == 1) serial_s = dt;
        std::printf("  threads=%-2d  %8.2f s  speedup %.2fx\n", t, dt, serial_s / dt);
    }

    std::printf("\nbatched decode, list 32, awgn 2.0 dB\n");
    set_threads_env(1);
    SimConfig cfg;
    cfg.spec = construct(n, n / 2, w, mu, CodeFamily::abs).spec;
    cfg.channel = parse_channel_desc("awgn:2.0");
    cfg.list_size = 32;
    cfg.crc_len = 8;
    cfg.max_trials = trials;
    cfg.target_errors = 1L << 40;
    cfg.seed = 1;
    double serial_frames = 0;
    for (int t : {1, hw}) {
        cfg.threads = t;
        auto t0 = std::chrono::steady_clock::now();
        auto res = run_fer(cfg);
        double dt = seconds_since(t0);
        double fps = static_cast<double>(res.trials) / dt;
        if (t == 1) serial_frames = fps;
        std::printf("  threads=%-2d  %8.1f frames/s  speedup %.2fx  (fer %.4g)\n", t, fps,
                    fps / serial_frames, res.fer);
    }
    return 0;
}
