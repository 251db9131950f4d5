// bitfade: capacity regions, cut-set bounds and coding experiments for
// bit-level fading channel models. Emits CSV for sweeps and JSON for
// single structured results; runs with a --seed are bit-reproducible.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bitfade/channels.hpp"
#include "bitfade/codingsim.hpp"
#include "bitfade/fading.hpp"
#include "bitfade/network.hpp"
#include "bitfade/regions.hpp"

namespace {

using nlohmann::json;

// shortest decimal form that round-trips
std::string fmt_double(double v) {
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void write_output(const std::string& path, const std::string& content) {
    if (path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open network file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find(',', start);
        if (end == std::string::npos) end = text.size();
        std::string item = text.substr(start, end - start);
        if (item.empty()) throw std::runtime_error(std::string(what) + ": empty entry");
        std::size_t used = 0;
        double v = std::stod(item, &used);
        if (used != item.size())
            throw std::runtime_error(std::string(what) + ": bad number '" + item + "'");
        values.push_back(v);
        if (end == text.size()) break;
        start = end + 1;
    }
    if (values.empty()) throw std::runtime_error(std::string(what) + ": empty list");
    return values;
}

json region_to_json(const bitfade::RateRegion& region) {
    json rows = json::array();
    for (const auto& c : region.constraints()) {
        json row = json::array();
        for (double coeff : c.coeffs) row.push_back(coeff);
        row.push_back(c.bound);
        rows.push_back(row);
    }
    return rows;
}

std::string region_to_csv(const bitfade::RateRegion& region) {
    std::string csv = "coeff_r1,coeff_r2,bound\n";
    for (const auto& c : region.constraints()) {
        for (double coeff : c.coeffs) csv += fmt_double(coeff) + ",";
        csv += fmt_double(c.bound) + "\n";
    }
    return csv;
}

int default_length(const bitfade::FadingPmf& pmf) { return pmf.max_level(); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bit-level fading channel models: capacity regions, cut-set bounds, coding sims"};
    app.require_subcommand(1);
    app.fallthrough();  // --seed/--out/--workers may follow the subcommand

    std::string out_path;
    std::uint64_t seed = 0;
    int workers = 1;
    app.add_option("--out", out_path, "output file (default: stdout)")->capture_default_str();
    app.add_option("--seed", seed, "master seed for randomized commands")->capture_default_str();
    app.add_option("--workers", workers, "worker threads (results do not depend on this)")
        ->capture_default_str();

    std::string result;

    // p2p: capacity of the truncation channel
    std::string p2p_pmf;
    auto* p2p = app.add_subcommand("p2p", "point-to-point model capacity E[M]");
    p2p->add_option("--pmf", p2p_pmf, "fading pmf, 'level:prob,...'")->required();
    p2p->callback([&] {
        auto pmf = bitfade::FadingPmf::from_text(p2p_pmf);
        bitfade::P2pChannel ch(default_length(pmf), pmf);
        json j;
        j["capacity"] = bitfade::p2p_capacity(ch);
        result = j.dump() + "\n";
    });

    // mac-region
    std::string mac_pmf1, mac_pmf2;
    int mac_n1 = -1, mac_n2 = -1;
    auto* mac = app.add_subcommand("mac-region", "multiple access capacity region constraints");
    mac->add_option("--pmf1", mac_pmf1, "user 1 fading pmf")->required();
    mac->add_option("--pmf2", mac_pmf2, "user 2 fading pmf")->required();
    mac->add_option("--n1", mac_n1, "user 1 input length (default: pmf support)");
    mac->add_option("--n2", mac_n2, "user 2 input length (default: pmf support)");
    mac->callback([&] {
        auto pmf1 = bitfade::FadingPmf::from_text(mac_pmf1);
        auto pmf2 = bitfade::FadingPmf::from_text(mac_pmf2);
        bitfade::MacChannel ch(mac_n1 < 0 ? default_length(pmf1) : mac_n1,
                               mac_n2 < 0 ? default_length(pmf2) : mac_n2, pmf1, pmf2);
        result = region_to_csv(bitfade::mac_region(ch));
    });

    // bc-sweep
    int bc_n = 0, bc_m1 = 0;
    std::string bc_pmf2;
    auto* bcs = app.add_subcommand("bc-sweep", "broadcast superposition operating points");
    bcs->add_option("--n", bc_n, "input bit levels")->required();
    bcs->add_option("--m1", bc_m1, "Receiver 1 fixed level")->required();
    bcs->add_option("--pmf2", bc_pmf2, "Receiver 2 fading pmf")->required();
    bcs->callback([&] {
        bitfade::BcChannel ch(bc_n, bc_m1, bitfade::FadingPmf::from_text(bc_pmf2));
        std::string csv = "i0,r1,r2\n";
        for (const auto& p : bitfade::bc_inner_sweep(ch))
            csv += std::to_string(p.i0) + "," + fmt_double(p.r1) + "," + fmt_double(p.r2) + "\n";
        result = csv;
    });

    // bc-outer
    std::string bc_mu = "0,0.5,1,2,5,10";
    auto* bco = app.add_subcommand("bc-outer", "broadcast weighted-sum outer bound");
    bco->add_option("--n", bc_n, "input bit levels")->required();
    bco->add_option("--m1", bc_m1, "Receiver 1 fixed level")->required();
    bco->add_option("--pmf2", bc_pmf2, "Receiver 2 fading pmf")->required();
    bco->add_option("--mu", bc_mu, "comma-separated weights mu >= 0")->capture_default_str();
    bco->callback([&] {
        bitfade::BcChannel ch(bc_n, bc_m1, bitfade::FadingPmf::from_text(bc_pmf2));
        std::string csv = "mu,value,i0\n";
        for (double mu : parse_double_list(bc_mu, "--mu")) {
            auto v = bitfade::bc_outer_value(ch, mu);
            csv += fmt_double(mu) + "," + fmt_double(v.value) + "," + std::to_string(v.i0) + "\n";
        }
        result = csv;
    });

    // gauss-compare
    std::string gc_snr, gc_snr1, gc_snr2;
    int gc_directions = 64;
    auto* gc = app.add_subcommand("gauss-compare",
                                  "model vs Gaussian reference (p2p with --snr, MAC with --snr1/--snr2)");
    gc->add_option("--snr", gc_snr, "p2p SNR distribution 'value:prob,...'");
    gc->add_option("--snr1", gc_snr1, "MAC user 1 SNR distribution");
    gc->add_option("--snr2", gc_snr2, "MAC user 2 SNR distribution");
    gc->add_option("--directions", gc_directions, "direction grid size for the region gap")
        ->capture_default_str();
    gc->callback([&] {
        json j;
        if (!gc_snr.empty()) {
            if (!gc_snr1.empty() || !gc_snr2.empty())
                throw std::runtime_error("gauss-compare: use either --snr or --snr1/--snr2");
            auto dist = bitfade::parse_value_dist(gc_snr);
            auto pmf = bitfade::FadingPmf::from_snr(dist);
            const double model = pmf.expectation();
            const double gauss = bitfade::gaussian_p2p_rate(dist);
            j["model_capacity"] = model;
            j["gaussian_rate"] = gauss;
            j["gap"] = std::abs(model - gauss);
        } else {
            if (gc_snr1.empty() || gc_snr2.empty())
                throw std::runtime_error("gauss-compare: need --snr for p2p or both --snr1 and --snr2 for MAC");
            auto d1 = bitfade::parse_value_dist(gc_snr1);
            auto d2 = bitfade::parse_value_dist(gc_snr2);
            auto pmf1 = bitfade::FadingPmf::from_snr(d1);
            auto pmf2 = bitfade::FadingPmf::from_snr(d2);
            bitfade::MacChannel ch(pmf1.max_level(), pmf2.max_level(), pmf1, pmf2);
            auto model = bitfade::mac_region(ch);
            auto gauss = bitfade::gaussian_mac_region(d1, d2);
            j["model_region"] = region_to_json(model);
            j["gaussian_region"] = region_to_json(gauss);
            j["gap"] = bitfade::region_gap(model, gauss, gc_directions);
        }
        result = j.dump() + "\n";
    });

    // cutset
    std::string net_path;
    std::int64_t mc_samples = 0;
    auto* cut = app.add_subcommand("cutset", "cut-set bound min over cuts of E[rank]");
    cut->add_option("--net", net_path, "network file")->required();
    cut->add_flag("--exact", "exact enumeration (default)");
    cut->add_option("--samples", mc_samples, "Monte Carlo sample count (switches to MC)");
    cut->callback([&] {
        auto net = bitfade::NetworkSpec::parse(read_file(net_path));
        const auto res = mc_samples > 0 ? bitfade::cutset_bound_mc(net, mc_samples, seed, workers)
                                        : bitfade::cutset_bound_exact(net);
        std::string csv = "cut_id,member_list,expected_rank,stderr,is_min\n";
        for (std::size_t i = 0; i < res.per_cut.size(); ++i) {
            const auto& pc = res.per_cut[i];
            const bool is_min = pc.cut.members == res.argmin.members;
            csv += std::to_string(i) + "," + pc.cut.describe(net) + "," +
                   fmt_double(pc.expected_rank) + "," + fmt_double(pc.stderr_) + "," +
                   (is_min ? "1" : "0") + "\n";
        }
        result = csv;
    });

    // net-sim
    std::string rates_text, scheme_text = "linear-random";
    std::string ns_lens_text;
    int ns_blocks = 0, ns_slack = -1, ns_trials = 0;
    auto* ns = app.add_subcommand("net-sim", "random-coding achievability simulation");
    ns->add_option("--net", net_path, "network file")->required();
    ns->add_option("--rate", rates_text, "comma-separated rates R")->required();
    ns->add_option("--n", ns_lens_text, "comma-separated block lengths n")->required();
    ns->add_option("--blocks", ns_blocks, "message blocks B")->required();
    ns->add_option("--slack", ns_slack, "pipeline slack L (default: longest path)");
    ns->add_option("--trials", ns_trials, "independent trials")->required();
    ns->add_option("--scheme", scheme_text, "lookup-random | linear-random")->capture_default_str();
    ns->callback([&] {
        auto net = bitfade::NetworkSpec::parse(read_file(net_path));
        bitfade::CodingScheme scheme;
        if (scheme_text == "lookup-random")
            scheme = bitfade::CodingScheme::LookupRandom;
        else if (scheme_text == "linear-random")
            scheme = bitfade::CodingScheme::LinearRandom;
        else
            throw std::runtime_error("net-sim: unknown scheme '" + scheme_text + "'");
        const int slack = ns_slack < 0 ? net.longest_path_edges() : ns_slack;
        std::string csv = "rate,n,B,trials,errors,error_rate,effective_rate\n";
        for (double n_val : parse_double_list(ns_lens_text, "--n")) {
            if (n_val != std::floor(n_val) || n_val < 1)
                throw std::runtime_error("net-sim: --n entries must be positive integers");
            for (double rate : parse_double_list(rates_text, "--rate")) {
                bitfade::SimConfig cfg{rate,      static_cast<int>(n_val), ns_blocks, slack,
                                       ns_trials, seed,                    scheme,    workers};
                const auto rep = bitfade::simulate_random_coding(net, cfg);
                csv += fmt_double(rate) + "," + std::to_string(static_cast<int>(n_val)) + "," +
                       std::to_string(ns_blocks) + "," + std::to_string(rep.trials) + "," +
                       std::to_string(rep.decode_errors) + "," + fmt_double(rep.error_rate) + "," +
                       fmt_double(rep.effective_rate) + "\n";
            }
        }
        result = csv;
    });

    // bc-sim
    int bc_i0 = 0, bc_block = 2048, bc_trials = 20;
    auto* bcsim = app.add_subcommand("bc-sim", "broadcast superposition erasure-coding simulation");
    bcsim->add_option("--n", bc_n, "input bit levels")->required();
    bcsim->add_option("--m1", bc_m1, "Receiver 1 fixed level")->required();
    bcsim->add_option("--pmf2", bc_pmf2, "Receiver 2 fading pmf")->required();
    bcsim->add_option("--i0", bc_i0, "top levels assigned to Receiver 2")->required();
    bcsim->add_option("--block-len", bc_block, "timesteps per code block")->capture_default_str();
    bcsim->add_option("--trials", bc_trials, "trials per payload grid point")->capture_default_str();
    bcsim->callback([&] {
        bitfade::BcChannel ch(bc_n, bc_m1, bitfade::FadingPmf::from_text(bc_pmf2));
        const auto rep = bitfade::bc_superposition_sim(ch, bc_i0, bc_block, bc_trials, seed, workers);
        json j;
        j["r1_achieved"] = rep.r1_achieved;
        j["r2_achieved"] = rep.r2_achieved;
        j["failure_rate"] = rep.failure_rate;
        result = j.dump() + "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        write_output(out_path, result);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
