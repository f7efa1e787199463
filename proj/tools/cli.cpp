#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "abspolar/channel.hpp"
#include "abspolar/construct.hpp"
#include "abspolar/crc.hpp"
#include "abspolar/dbec.hpp"
#include "abspolar/decode.hpp"
#include "abspolar/encode.hpp"
#include "abspolar/simulate.hpp"

using namespace abspolar;

namespace {

int cmd_construct(const std::string& channel, long n, long k, const std::string& family,
                  std::size_t mu, int awgn_levels, double design_snr, bool has_design_snr,
                  const std::string& out) {
    ChannelDesc desc = parse_channel_desc(channel);
    if (desc.kind == ChannelDesc::Kind::awgn && has_design_snr) desc.param = design_snr;
    double rate = static_cast<double>(k) / static_cast<double>(n);
    BmsChannel w = build_channel(desc, rate, awgn_levels);
    CodeFamily fam = family == "standard" ? CodeFamily::standard : CodeFamily::abs;
    CodeSpec spec = construct(n, k, w, mu, fam).spec;
    if (out.empty())
        std::cout << to_text(spec);
    else
        save_spec(spec, out);
    return 0;
}

int cmd_encode(const std::string& spec_path, const std::string& msg_hex) {
    CodeSpec spec = load_spec(spec_path);
    BitVector msg = hex_to_bits(msg_hex, spec.k);
    std::cout << bits_to_hex(encode(spec, msg)) << "\n";
    return 0;
}

int cmd_decode(const std::string& spec_path, const std::string& rx_path, int list_size,
               int crc_len) {
    CodeSpec spec = load_spec(spec_path);
    SclDecoder decoder(spec, list_size, decoder_kind_for(spec));
    std::ifstream in(rx_path);
    if (!in) throw std::runtime_error("cannot open rx file " + rx_path);
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        LlrVector llrs;
        double v;
        while (ls >> v) llrs.push_back(clamp_llr(v));
        if (static_cast<long>(llrs.size()) != spec.n)
            throw std::runtime_error("line " + std::to_string(lineno) + ": expected " +
                                     std::to_string(spec.n) + " LLRs, got " +
                                     std::to_string(llrs.size()));
        auto paths = decoder.decode_list(ReceivedVector::from_llrs(llrs));
        const auto& best = paths[crc_select(paths, crc_len)];
        bool pass = crc_len == 0 || crc_check(best.message, crc_len);
        std::cout << bits_to_hex(best.message) << " crc=" << (pass ? "pass" : "fail") << "\n";
    }
    return 0;
}

int cmd_simulate(const std::string& spec_path, const std::string& channel, int list_size,
                 int crc_len, long trials, long target_errors, std::uint64_t seed, int threads,
                 const std::string& out) {
    SimConfig cfg;
    cfg.spec = load_spec(spec_path);
    cfg.channel = parse_channel_desc(channel);
    cfg.list_size = list_size;
    cfg.crc_len = crc_len;
    cfg.max_trials = trials;
    cfg.target_errors = target_errors;
    cfg.seed = seed;
    cfg.threads = threads;
    SimResult res = run_fer(cfg);
    std::ostringstream csv;
    csv << SimResult::csv_header() << "\n" << res.csv_row() << "\n";
    if (out.empty())
        std::cout << csv.str();
    else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << csv.str();
    }
    return 0;
}

int cmd_bec_analyze(double eps, int min_log_n, int max_log_n, const std::string& family,
                    const std::string& out) {
    CodeFamily fam = family == "standard" ? CodeFamily::standard : CodeFamily::abs;
    std::ostringstream csv;
    csv << "n,fraction,gamma\n";
    std::vector<std::pair<double, double>> points;
    char buf[128];
    for (int e = min_log_n; e <= max_log_n; ++e) {
        long n = 1L << e;
        auto res = construct_bec(n, eps, fam);
        double f = unpolarized_fraction(res.erasure_probs);
        double g = gamma_metric(res.erasure_probs);
        std::snprintf(buf, sizeof buf, "%ld,%.8f,%.8g\n", n, f, g);
        csv << buf;
        if (f > 0.0) points.push_back({static_cast<double>(n), f});
    }
    if (points.size() >= 3) {
        auto fit = scaling_exponent(points);
        std::snprintf(buf, sizeof buf, "regression,mu=%.6g,c=%.6g\n", fit.mu, fit.c);
        csv << buf;
    }
    if (out.empty())
        std::cout << csv.str();
    else {
        std::ofstream f(out);
        if (!f) throw std::runtime_error("cannot write " + out);
        f << csv.str();
    }
    return 0;
}

int cmd_spec_show(const std::string& spec_path) {
    CodeSpec spec = load_spec(spec_path);
    std::cout << "n=" << spec.n << " k=" << spec.k << " rate=" << static_cast<double>(spec.k) / spec.n
              << "\n";
    for (std::size_t j = 0; j < spec.perms.sets.size(); ++j) {
        const auto& s = spec.perms.sets[j];
        if (s.empty()) continue;
        std::cout << "swaps at layer " << (1L << (j + 1)) << ":";
        for (int v : s) std::cout << ' ' << v;
        std::cout << "\n";
    }
    if (spec.perms.empty()) std::cout << "no swaps (plain polar code)\n";
    std::cout << "info set:";
    for (int a : spec.info_set) std::cout << ' ' << a;
    std::cout << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adjacent-bits-swapped polar codes: construction, coding, analysis"};
    app.require_subcommand(1);

    // construct
    auto* c = app.add_subcommand("construct", "Build a code and write its spec");
    std::string channel = "bec:0.5", family = "abs", out;
    long n = 0, k = 0;
    std::size_t mu = kDefaultMu;
    int awgn_levels = 64;
    double design_snr = 0.0;
    c->add_option("--n", n, "code length (power of two)")->required();
    c->add_option("--k", k, "code dimension")->required();
    c->add_option("--channel", channel, "bec:<eps> | bsc:<p> | awgn:<ebn0_db>");
    c->add_option("--family", family, "abs | standard")->check(CLI::IsMember({"abs", "standard"}));
    c->add_option("--mu", mu, "output-alphabet cap for construction");
    c->add_option("--awgn-levels", awgn_levels, "quantization levels for awgn");
    auto* dsnr = c->add_option("--design-snr", design_snr, "override awgn construction Eb/N0 (dB)");
    c->add_option("--out", out, "spec file (stdout when omitted)");

    // encode
    auto* e = app.add_subcommand("encode", "Encode a hex message");
    std::string spec_path, msg_hex;
    e->add_option("--spec", spec_path, "spec file")->required();
    e->add_option("--msg", msg_hex, "message bits as hex")->required();

    // decode
    auto* d = app.add_subcommand("decode", "Decode LLR vectors, one per line");
    std::string rx_path;
    int list_size = 32, crc_len = 0;
    d->add_option("--spec", spec_path, "spec file")->required();
    d->add_option("--rx", rx_path, "file of LLR vectors")->required();
    d->add_option("--list", list_size, "list size");
    d->add_option("--crc", crc_len, "crc length (0,4,8,12,16,20,24)");

    // simulate
    auto* s = app.add_subcommand("simulate", "Monte-Carlo frame-error-rate estimate");
    long trials = 100000, target_errors = 100;
    std::uint64_t seed = 1;
    int threads = 0;
    s->add_option("--spec", spec_path, "spec file")->required();
    s->add_option("--channel", channel, "bec:<eps> | bsc:<p> | awgn:<ebn0_db>")->required();
    s->add_option("--list", list_size, "list size");
    s->add_option("--crc", crc_len, "crc length");
    s->add_option("--trials", trials, "trial budget");
    s->add_option("--target-errors", target_errors, "stop after this many frame errors");
    s->add_option("--seed", seed, "rng seed");
    s->add_option("--threads", threads, "worker count (0 = auto)");
    s->add_option("--out", out, "csv output file (stdout when omitted)");

    // bec-analyze
    auto* b = app.add_subcommand("bec-analyze", "Exact polarization analysis over a BEC");
    double eps = 0.5;
    int min_log_n = 6, max_log_n = 20;
    b->add_option("--eps", eps, "erasure probability")->required();
    b->add_option("--min-log-n", min_log_n, "smallest log2(n)");
    b->add_option("--max-log-n", max_log_n, "largest log2(n)");
    b->add_option("--family", family, "abs | standard")->check(CLI::IsMember({"abs", "standard"}));
    b->add_option("--out", out, "csv output file (stdout when omitted)");

    // spec-show
    auto* v = app.add_subcommand("spec-show", "Print a parsed spec");
    v->add_option("--spec", spec_path, "spec file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c) return cmd_construct(channel, n, k, family, mu, awgn_levels, design_snr,
                                     dsnr->count() > 0, out);
        if (*e) return cmd_encode(spec_path, msg_hex);
        if (*d) return cmd_decode(spec_path, rx_path, list_size, crc_len);
        if (*s) return cmd_simulate(spec_path, channel, list_size, crc_len, trials, target_errors,
                                    seed, threads, out);
        if (*b) return cmd_bec_analyze(eps, min_log_n, max_log_n, family, out);
        if (*v) return cmd_spec_show(spec_path);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 1;
}
