// Serial reference vs OpenMP kernels for batch registration and batch
// handshakes. Prints wall time for each and checks the outputs agree.

#include "lisa/actors.hpp"
#include "lisa/batch.hpp"

#include "CLI11.hpp"

#include <chrono>
#include <iomanip>
#include <iostream>

namespace {

template <typename Fn>
double millis(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool same(const std::vector<lisa::batch::RegistrationTrial>& a, const std::vector<lisa::batch::RegistrationTrial>& b) {
    if(a.size() != b.size()) {
        return false;
    }
    for(std::size_t i = 0; i != a.size(); ++i) {
        if(!(a[i].record == b[i].record) || !(a[i].credential.d == b[i].credential.d)) {
            return false;
        }
    }
    return true;
}

bool same(const std::vector<lisa::batch::HandshakeTrial>& a, const std::vector<lisa::batch::HandshakeTrial>& b) {
    if(a.size() != b.size()) {
        return false;
    }
    for(std::size_t i = 0; i != a.size(); ++i) {
        if(a[i].sm_key != b[i].sm_key || a[i].sp_key != b[i].sp_key || a[i].failure != b[i].failure) {
            return false;
        }
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP batch kernels"};
    std::string profile = "toy";
    std::size_t count = 2000;
    std::uint64_t seed = 7;
    app.add_option("--profile", profile, "toy | paper-160");
    app.add_option("--count", count, "trials per kernel");
    app.add_option("--seed", seed, "seed");
    CLI11_PARSE(app, argc, argv);

    try {
        const lisa::CurveParams curve = lisa::profiles::by_name(profile);
        const lisa::simnet::Deployment d = lisa::simnet::provision(curve, 8, seed);

        std::vector<lisa::Identity> ids;
        for(std::size_t i = 0; i != count; ++i) {
            ids.push_back(lisa::Identity{0x10000000u + static_cast<std::uint32_t>(i)});
        }
        std::vector<lisa::batch::RegistrationTrial> rs;
        std::vector<lisa::batch::RegistrationTrial> rp;
        const double reg_s = millis([&] { rs = lisa::batch::register_serial(*d.ttp, ids, seed); });
        const double reg_p = millis([&] { rp = lisa::batch::register_parallel(*d.ttp, ids, seed); });

        lisa::batch::HandshakeBatch hb{d.params(), d.meters, d.provider, d.directory.get(), {}, lisa::Timestamp{1000}};
        std::vector<lisa::batch::HandshakeTrial> hs;
        std::vector<lisa::batch::HandshakeTrial> hp;
        const double hs_s = millis([&] { hs = lisa::batch::handshake_serial(hb, count, seed); });
        const double hs_p = millis([&] { hp = lisa::batch::handshake_parallel(hb, count, seed); });

        const bool ok = same(rs, rp) && same(hs, hp);
        std::cout << std::fixed << std::setprecision(1);
        std::cout << "profile " << profile << " trials " << count << " threads " << lisa::batch::max_threads()
                  << '\n';
        std::cout << "registration  serial " << reg_s << " ms  parallel " << reg_p << " ms  speedup "
                  << std::setprecision(2) << reg_s / reg_p << std::setprecision(1) << '\n';
        std::cout << "handshake     serial " << hs_s << " ms  parallel " << hs_p << " ms  speedup "
                  << std::setprecision(2) << hs_s / hs_p << '\n';
        std::cout << (ok ? "outputs identical\n" : "OUTPUT MISMATCH\n");
        return ok ? 0 : 1;
    } catch(const lisa::Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
