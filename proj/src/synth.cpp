#include "advexplain/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "advexplain/error.hpp"

namespace advexplain {

namespace {

// Field indices follow the 41-column NSL-KDD layout.
struct Rec {
    long duration = 0;
    std::string protocol = "tcp";
    std::string service = "http";
    std::string flag = "SF";
    long src_bytes = 0, dst_bytes = 0;
    int land = 0;
    long wrong_fragment = 0, urgent = 0, hot = 0, num_failed_logins = 0;
    int logged_in = 0;
    long num_compromised = 0;
    int root_shell = 0;
    long su_attempted = 0, num_root = 0, num_file_creations = 0;
    long num_shells = 0, num_access_files = 0, num_outbound_cmds = 0;
    int is_host_login = 0, is_guest_login = 0;
    long count = 1, srv_count = 1;
    double serror_rate = 0, srv_serror_rate = 0, rerror_rate = 0,
           srv_rerror_rate = 0, same_srv_rate = 1, diff_srv_rate = 0,
           srv_diff_host_rate = 0;
    long dst_host_count = 255, dst_host_srv_count = 255;
    double dst_host_same_srv_rate = 1, dst_host_diff_srv_rate = 0,
           dst_host_same_src_port_rate = 0, dst_host_srv_diff_host_rate = 0,
           dst_host_serror_rate = 0, dst_host_srv_serror_rate = 0,
           dst_host_rerror_rate = 0, dst_host_srv_rerror_rate = 0;
    std::string label = "normal";
    int difficulty = 20;
};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return unit_(gen_); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    long uniform_int(long lo, long hi) {  // inclusive
        return lo + static_cast<long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(double p) { return uniform() < p; }
    double gaussian(double mean, double sd) { return mean + sd * normal_(gen_); }
    long exp_int(double mean, long cap) {
        const double v = -mean * std::log(1.0 - uniform());
        return std::min(cap, static_cast<long>(v));
    }
    // Rate in [0,1] concentrated near zero.
    double low_rate(double scale = 0.2) { return std::pow(uniform(), 4.0) * scale; }

    template <typename T>
    const T& pick(const std::vector<std::pair<T, double>>& weighted) {
        double total = 0;
        for (const auto& [v, w] : weighted) total += w;
        double r = uniform() * total;
        for (const auto& [v, w] : weighted) {
            r -= w;
            if (r <= 0) return v;
        }
        return weighted.back().first;
    }

private:
    std::mt19937_64 gen_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

Rec normal_regular(Rng& rng) {
    Rec r;
    r.label = "normal";
    r.duration = rng.chance(0.25) ? 0 : rng.exp_int(120, 10000);
    r.protocol = rng.pick<std::string>({{"tcp", .80}, {"udp", .15}, {"icmp", .05}});
    if (r.protocol == "tcp") {
        r.service = rng.pick<std::string>({{"http", .50}, {"smtp", .15},
                                           {"ftp_data", .12}, {"ftp", .07},
                                           {"telnet", .06}, {"other", .10}});
    } else if (r.protocol == "udp") {
        r.service = rng.pick<std::string>({{"domain_u", .70}, {"ntp_u", .15}, {"other", .15}});
    } else {
        r.service = rng.pick<std::string>({{"eco_i", .60}, {"ecr_i", .40}});
    }
    r.flag = rng.pick<std::string>({{"SF", .95}, {"REJ", .03}, {"S1", .02}});
    r.src_bytes = std::min(1000000L, static_cast<long>(std::exp(rng.gaussian(5.5, 1.2))));
    r.dst_bytes = rng.chance(0.15)
                      ? 0
                      : std::min(5000000L, static_cast<long>(std::exp(rng.gaussian(6.5, 1.5))));
    r.logged_in = rng.chance(0.75) ? 1 : 0;
    r.hot = rng.chance(0.90) ? 0 : rng.uniform_int(1, 2);
    r.num_failed_logins = rng.chance(0.98) ? 0 : 1;
    r.num_root = rng.chance(0.90) ? 0 : rng.uniform_int(1, 5);
    r.num_file_creations = rng.chance(0.92) ? 0 : rng.uniform_int(1, 3);
    r.num_access_files = rng.chance(0.95) ? 0 : 1;
    r.is_guest_login = rng.chance(0.05) ? 1 : 0;
    r.count = rng.uniform_int(1, 20);
    r.srv_count = rng.uniform_int(1, 20);
    r.serror_rate = rng.low_rate();
    r.srv_serror_rate = rng.low_rate();
    r.rerror_rate = rng.low_rate();
    r.srv_rerror_rate = rng.low_rate();
    r.same_srv_rate = 1.0 - 0.3 * rng.uniform() * rng.uniform();
    r.diff_srv_rate = 0.10 + 0.20 * rng.uniform();
    r.srv_diff_host_rate = 0.2 * rng.uniform();
    r.dst_host_count = rng.uniform_int(20, 255);
    r.dst_host_srv_count = rng.uniform_int(80, 255);
    r.dst_host_same_srv_rate = rng.uniform(0.7, 1.0);
    r.dst_host_diff_srv_rate = 0.15 * rng.uniform();
    r.dst_host_same_src_port_rate = 0.12 * rng.uniform();
    r.dst_host_srv_diff_host_rate = 0.1 * rng.uniform();
    r.dst_host_serror_rate = rng.low_rate(0.1);
    r.dst_host_srv_serror_rate = rng.low_rate(0.1);
    r.dst_host_rerror_rate = rng.low_rate(0.1);
    r.dst_host_srv_rerror_rate = rng.low_rate(0.1);
    return r;
}

// Flood-pattern connection shared by the DOS generators and the
// DOS-looking normal subpopulation.
Rec flood_core(Rng& rng) {
    Rec r;
    r.duration = 0;
    r.protocol = "tcp";
    r.service = rng.pick<std::string>({{"private", .75}, {"eco_i", .05}, {"other", .20}});
    r.flag = rng.pick<std::string>({{"S0", .55}, {"SF", .25}, {"REJ", .20}});
    r.src_bytes = 0;
    r.dst_bytes = 0;
    r.logged_in = 0;
    r.count = rng.uniform_int(150, 511);
    r.srv_count = rng.uniform_int(100, 511);
    r.serror_rate = rng.uniform(0.5, 1.0);
    r.srv_serror_rate = r.serror_rate * rng.uniform(0.9, 1.0);
    r.rerror_rate = rng.low_rate(0.1);
    r.srv_rerror_rate = rng.low_rate(0.1);
    r.same_srv_rate = rng.uniform(0.8, 1.0);
    r.diff_srv_rate = 0.06 * rng.uniform();
    r.srv_diff_host_rate = 0.1 * rng.uniform();
    r.dst_host_count = rng.uniform_int(180, 255);
    r.dst_host_srv_count = rng.uniform_int(1, 30);
    r.dst_host_same_srv_rate = rng.uniform(0.7, 1.0);
    r.dst_host_diff_srv_rate = 0.05 * rng.uniform();
    r.dst_host_same_src_port_rate = rng.uniform(0.55, 1.0);
    r.dst_host_srv_diff_host_rate = 0.1 * rng.uniform();
    r.dst_host_serror_rate = r.serror_rate * rng.uniform(0.85, 1.0);
    r.dst_host_srv_serror_rate = r.serror_rate * rng.uniform(0.85, 1.0);
    r.dst_host_rerror_rate = rng.low_rate(0.1);
    r.dst_host_srv_rerror_rate = rng.low_rate(0.1);
    return r;
}

// Burst pattern: many short successful connections to one host. Unlike
// the syn-flood pattern the error rates stay low. Shared by the mailbomb
// generator (always private service) and the DOS-looking normal
// subpopulation (mixed service), so within the burst region the service
// feature carries most of the class signal.
Rec pattern_burst(Rng& rng) {
    Rec r = flood_core(rng);
    r.flag = rng.pick<std::string>({{"SF", .70}, {"REJ", .20}, {"S0", .10}});
    r.service = "private";
    r.src_bytes = rng.uniform_int(0, 300);
    r.count = rng.uniform_int(100, 511);
    r.serror_rate = 0.25 * rng.uniform();
    r.srv_serror_rate = r.serror_rate;
    r.dst_host_serror_rate = r.serror_rate * rng.uniform(0.8, 1.0);
    r.dst_host_srv_serror_rate = r.dst_host_serror_rate;
    // Class-neutral payload bookkeeping: identical distribution for the
    // mailbomb attack and its benign twin, so it spreads the population
    // without carrying any label signal.
    r.hot = rng.uniform_int(0, 3);
    r.num_file_creations = rng.uniform_int(0, 4);
    r.num_access_files = rng.uniform_int(0, 2);
    return r;
}

// Moderate-traffic connection profile: successful flags, low error rates,
// mid-range connection counts. Shared by the apache2 generator and the
// mid-band normal subpopulation below, which differ only in their
// srv_diff_host_rate ranges.
Rec pattern_sf_flood(Rng& rng) {
    Rec r = flood_core(rng);
    r.flag = "SF";
    r.serror_rate = 0.3 * rng.uniform();
    r.srv_serror_rate = r.serror_rate;
    r.dst_host_serror_rate = r.serror_rate;
    r.dst_host_srv_serror_rate = r.serror_rate;
    r.dst_bytes = rng.chance(0.5) ? 0 : rng.uniform_int(0, 500);
    r.count = rng.uniform_int(20, 120);
    r.srv_count = rng.uniform_int(10, 100);
    r.logged_in = rng.chance(0.7) ? 1 : 0;
    r.diff_srv_rate = rng.uniform(0.10, 0.30);
    r.dst_host_count = rng.uniform_int(40, 180);
    r.dst_host_srv_count = rng.uniform_int(80, 255);
    r.dst_host_same_src_port_rate = 0.3 * rng.uniform();
    return r;
}

// DOS-looking normal traffic: bursty but legitimate connections. Drawn
// from the burst pattern itself (indistinguishable from mailbomb, so any
// classifier gets these wrong) or from the SF-flood pattern with
// mid-range byte counts, which sit between the two apache2 byte modes: a
// band no single linear threshold can carve out.
Rec normal_doslike(Rng& rng, bool burst_twin) {
    if (burst_twin) {
        Rec r = pattern_burst(rng);
        r.label = "normal";
        if (rng.chance(0.40))
            r.service = rng.pick<std::string>({{"http", .60}, {"smtp", .40}});
        return r;
    }
    Rec r = pattern_sf_flood(rng);
    r.label = "normal";
    r.src_bytes = rng.uniform_int(100, 300);
    r.srv_diff_host_rate = rng.uniform(0.40, 0.60);
    return r;
}

Rec dos_apache2(Rng& rng) {
    Rec r = pattern_sf_flood(rng);
    r.label = "apache2";
    if (rng.chance(0.5)) {
        r.src_bytes = rng.uniform_int(0, 80);
        r.srv_diff_host_rate = rng.uniform(0.10, 0.30);
    } else {
        r.src_bytes = rng.uniform_int(400, 900);
        r.srv_diff_host_rate = rng.uniform(0.70, 0.90);
    }
    return r;
}

Rec dos_neptune(Rng& rng) {
    Rec r = flood_core(rng);
    r.label = "neptune";
    r.flag = rng.pick<std::string>({{"S0", .90}, {"REJ", .10}});
    r.count = rng.uniform_int(200, 511);
    r.serror_rate = rng.uniform(0.9, 1.0);
    r.srv_serror_rate = r.serror_rate;
    r.dst_host_serror_rate = r.serror_rate;
    r.dst_host_srv_serror_rate = r.serror_rate;
    return r;
}

Rec dos_smurf(Rng& rng) {
    Rec r = flood_core(rng);
    r.label = "smurf";
    r.protocol = "icmp";
    r.service = "ecr_i";
    r.flag = "SF";
    r.src_bytes = rng.uniform_int(520, 1480);
    r.count = rng.uniform_int(300, 511);
    r.serror_rate = 0;
    r.srv_serror_rate = 0;
    r.dst_host_serror_rate = 0;
    r.dst_host_srv_serror_rate = 0;
    r.dst_host_same_src_port_rate = rng.uniform(0.7, 1.0);
    return r;
}

Rec dos_back(Rng& rng) {
    Rec r = flood_core(rng);
    r.label = "back";
    r.service = "http";
    r.flag = "SF";
    r.src_bytes = rng.uniform_int(53000, 55000);
    r.dst_bytes = rng.uniform_int(6000, 10000);
    r.logged_in = rng.chance(0.6) ? 1 : 0;
    r.hot = rng.chance(0.5) ? 2 : 0;
    r.count = rng.uniform_int(5, 60);
    r.srv_count = r.count;
    r.serror_rate = 0;
    r.srv_serror_rate = 0;
    r.dst_host_serror_rate = 0;
    r.dst_host_srv_serror_rate = 0;
    r.dst_host_srv_count = rng.uniform_int(1, 30);
    r.dst_host_same_src_port_rate = 0.3 * rng.uniform();
    return r;
}

Rec dos_teardrop(Rng& rng) {
    Rec r = flood_core(rng);
    r.label = "teardrop";
    r.protocol = "udp";
    r.service = rng.chance(0.8) ? "private" : "other";
    r.flag = "SF";
    r.wrong_fragment = rng.uniform_int(1, 3);
    r.src_bytes = 28;
    r.count = rng.uniform_int(50, 200);
    r.serror_rate = 0;
    r.srv_serror_rate = 0;
    r.dst_host_serror_rate = 0;
    r.dst_host_srv_serror_rate = 0;
    return r;
}

Rec probe_scan(Rng& rng, const std::string& name) {
    Rec r;
    r.label = name;
    r.duration = 0;
    r.protocol = rng.pick<std::string>({{"tcp", .70}, {"udp", .15}, {"icmp", .15}});
    r.service = rng.pick<std::string>({{"private", .25}, {"http", .10}, {"ftp", .10},
                                       {"telnet", .10}, {"smtp", .10}, {"finger", .10},
                                       {"domain_u", .05}, {"eco_i", .10},
                                       {"sunrpc", .10}, {"other", .10}});
    r.flag = rng.pick<std::string>({{"REJ", .35}, {"SF", .25}, {"RSTR", .25}, {"S0", .15}});
    r.src_bytes = rng.uniform_int(0, 40);
    r.dst_bytes = rng.chance(0.3) ? rng.uniform_int(0, 200) : 0;
    r.count = rng.uniform_int(1, 30);
    r.srv_count = rng.uniform_int(1, 15);
    r.serror_rate = 0.3 * rng.uniform();
    r.srv_serror_rate = r.serror_rate;
    r.rerror_rate = rng.uniform(0.3, 1.0);
    r.srv_rerror_rate = r.rerror_rate * rng.uniform(0.8, 1.0);
    r.same_srv_rate = rng.uniform(0.1, 0.6);
    r.diff_srv_rate = rng.uniform(0.5, 1.0);
    r.srv_diff_host_rate = 0.5 * rng.uniform();
    r.dst_host_count = rng.uniform_int(100, 255);
    r.dst_host_srv_count = rng.uniform_int(5, 80);
    r.dst_host_same_srv_rate = 0.4 * rng.uniform();
    r.dst_host_diff_srv_rate = rng.uniform(0.3, 1.0);
    r.dst_host_same_src_port_rate = 0.4 * rng.uniform();
    r.dst_host_srv_diff_host_rate = 0.4 * rng.uniform();
    r.dst_host_serror_rate = 0.3 * rng.uniform();
    r.dst_host_srv_serror_rate = r.dst_host_serror_rate;
    r.dst_host_rerror_rate = rng.uniform(0.3, 1.0);
    r.dst_host_srv_rerror_rate = r.dst_host_rerror_rate;
    return r;
}

Rec probe_sweep(Rng& rng, const std::string& name) {
    Rec r = probe_scan(rng, name);
    r.protocol = "icmp";
    r.service = "eco_i";
    r.flag = "SF";
    r.src_bytes = rng.uniform_int(8, 20);
    r.rerror_rate = 0;
    r.srv_rerror_rate = 0;
    r.same_srv_rate = 1.0;
    r.diff_srv_rate = 0;
    r.srv_diff_host_rate = rng.uniform(0.5, 1.0);
    r.dst_host_count = rng.uniform_int(1, 30);
    r.dst_host_srv_count = rng.uniform_int(5, 80);
    r.dst_host_same_srv_rate = 1.0;
    r.dst_host_diff_srv_rate = 0;
    r.dst_host_same_src_port_rate = rng.uniform(0.4, 1.0);
    r.dst_host_rerror_rate = 0;
    r.dst_host_srv_rerror_rate = 0;
    return r;
}

Rec r2l_record(Rng& rng) {
    Rec r = normal_regular(rng);
    r.label = rng.pick<std::string>({{"guess_passwd", .4}, {"warezclient", .3},
                                     {"ftp_write", .2}, {"imap", .1}});
    r.service = rng.pick<std::string>({{"ftp", .4}, {"telnet", .4}, {"imap4", .2}});
    if (r.label == "guess_passwd") r.num_failed_logins = rng.uniform_int(1, 5);
    if (r.label == "warezclient") r.is_guest_login = 1;
    r.hot = rng.uniform_int(0, 4);
    return r;
}

Rec u2r_record(Rng& rng) {
    Rec r = normal_regular(rng);
    r.label = rng.chance(0.6) ? "buffer_overflow" : "rootkit";
    r.service = rng.chance(0.7) ? "telnet" : "ftp";
    r.root_shell = 1;
    r.num_root = rng.uniform_int(1, 6);
    r.duration = rng.uniform_int(50, 300);
    return r;
}

Rec synth_record(Rng& rng, bool include_out_of_scope) {
    const double oos = include_out_of_scope ? 0.02 : 0.0;
    const double u = rng.uniform();
    if (u < 0.52) {
        if (rng.chance(0.10)) return normal_doslike(rng, rng.chance(0.40));
        return normal_regular(rng);
    }
    if (u < 0.88) {
        // 6% of DOS records are indistinguishable from regular normal
        // traffic; they supply the DOS-misclassified-as-Normal population.
        if (rng.chance(0.06)) {
            Rec r = normal_regular(rng);
            r.label = "back";
            return r;
        }
        const double v = rng.uniform();
        if (v < 0.40) return dos_neptune(rng);
        if (v < 0.60) return dos_smurf(rng);
        if (v < 0.70) return dos_back(rng);
        if (v < 0.85) return dos_apache2(rng);
        if (v < 0.95) {
            Rec r = pattern_burst(rng);
            r.label = "mailbomb";
            return r;
        }
        return dos_teardrop(rng);
    }
    if (u < 0.98) {
        if (rng.chance(0.07)) {
            Rec r = normal_regular(rng);
            r.label = "satan";
            return r;
        }
        const double v = rng.uniform();
        if (v < 0.55) return probe_scan(rng, rng.chance(0.6) ? "satan" : "portsweep");
        if (v < 0.85) return probe_sweep(rng, "ipsweep");
        return probe_scan(rng, "nmap");
    }
    if (u < 0.98 + oos * 0.75) return r2l_record(rng);
    if (u < 0.98 + oos) return u2r_record(rng);
    return normal_regular(rng);
}

std::string rate(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", std::clamp(v, 0.0, 1.0));
    return buf;
}

void write_record(std::ostream& out, const Rec& r) {
    out << r.duration << ',' << r.protocol << ',' << r.service << ',' << r.flag
        << ',' << r.src_bytes << ',' << r.dst_bytes << ',' << r.land << ','
        << r.wrong_fragment << ',' << r.urgent << ',' << r.hot << ','
        << r.num_failed_logins << ',' << r.logged_in << ',' << r.num_compromised
        << ',' << r.root_shell << ',' << r.su_attempted << ',' << r.num_root
        << ',' << r.num_file_creations << ',' << r.num_shells << ','
        << r.num_access_files << ',' << r.num_outbound_cmds << ','
        << r.is_host_login << ',' << r.is_guest_login << ',' << r.count << ','
        << r.srv_count << ',' << rate(r.serror_rate) << ','
        << rate(r.srv_serror_rate) << ',' << rate(r.rerror_rate) << ','
        << rate(r.srv_rerror_rate) << ',' << rate(r.same_srv_rate) << ','
        << rate(r.diff_srv_rate) << ',' << rate(r.srv_diff_host_rate) << ','
        << r.dst_host_count << ',' << r.dst_host_srv_count << ','
        << rate(r.dst_host_same_srv_rate) << ',' << rate(r.dst_host_diff_srv_rate)
        << ',' << rate(r.dst_host_same_src_port_rate) << ','
        << rate(r.dst_host_srv_diff_host_rate) << ','
        << rate(r.dst_host_serror_rate) << ',' << rate(r.dst_host_srv_serror_rate)
        << ',' << rate(r.dst_host_rerror_rate) << ','
        << rate(r.dst_host_srv_rerror_rate) << ',' << r.label << ','
        << r.difficulty << '\n';
}

}  // namespace

void write_synthetic_nslkdd(std::ostream& out, const SynthOptions& options) {
    Rng rng(options.seed);
    for (std::size_t i = 0; i < options.n_records; ++i) {
        Rec r = synth_record(rng, options.include_out_of_scope);
        r.difficulty = static_cast<int>(rng.uniform_int(1, 21));
        write_record(out, r);
    }
}

void write_synthetic_nslkdd_file(const std::filesystem::path& path,
                                 const SynthOptions& options) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    write_synthetic_nslkdd(out, options);
}

}  // namespace advexplain
