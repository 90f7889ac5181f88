#include "nemo/network.hpp"
#include "../oracle.hpp"

#include <doctest.h>

#include <sstream>

using nemo::Backend;
using nemo::Network;

namespace {

Network pair_network(Backend backend, std::uint64_t seed) {
    Network net(backend, seed);
    net.add_area({"S", 200, 10, 0.1, 0.2});
    net.add_area({"T", 200, 10, 0.1, 0.2});
    net.add_connectome(0, 1);
    net.add_connectome(1, 1);
    return net;
}

nemo::Winners first_k(std::size_t k, nemo::Neuron from = 0) {
    nemo::Winners w(k);
    std::iota(w.begin(), w.end(), from);
    return w;
}

} // namespace

TEST_SUITE("network") {

TEST_CASE("explicit dynamics match the brute-force equations") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto mismatch = oracle::compare_with_oracle(seed, 12);
        CHECK_MESSAGE(!mismatch, (mismatch ? *mismatch : ""));
    }
}

TEST_CASE("weights equal (1+beta)^m") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
        CHECK(oracle::plasticity_error_ulps(seed, 20) <= 1.0);
}

TEST_CASE("clamped area fires exactly its clamp whatever its input") {
    for (auto backend : {Backend::Explicit, Backend::Lazy}) {
        Network net = pair_network(backend, 3);
        net.set_firing(1, first_k(10, 50));
        const auto clamp = first_k(10, 100);
        const auto& s = net.step({{1, clamp}, {0, first_k(10)}}, true);
        CHECK(s.winners[1] == clamp);
        CHECK(s.winners[0] == first_k(10));
    }
}

TEST_CASE("silent areas select nothing") {
    for (auto backend : {Backend::Explicit, Backend::Lazy}) {
        Network net = pair_network(backend, 3);
        nemo::AreaMask silent{false, true};
        const auto& s = net.step({{0, first_k(10)}}, true, silent);
        CHECK(s.winners[1].empty());
        CHECK(net.last_cap_input()[1] == 0.0);
        // A clamp beats the mask.
        const auto& c = net.step({{1, first_k(10, 7)}}, true, silent);
        CHECK(c.winners[1] == first_k(10, 7));
    }
}

TEST_CASE("unreached areas stay empty") {
    Network net = pair_network(Backend::Lazy, 1);
    const auto& s = net.step({}, true);
    CHECK(s.winners[0].empty());
    CHECK(s.winners[1].empty());
}

TEST_CASE("readout is plasticity-frozen and repeatable") {
    for (auto backend : {Backend::Explicit, Backend::Lazy}) {
        Network net = pair_network(backend, 5);
        for (int i = 0; i < 5; ++i) net.step({{0, first_k(10)}}, true);
        const auto before = net.weight_checksum();
        const auto support = net.support_size(1);
        const auto stim = first_k(10);
        const auto a = net.readout({{0, &stim}}, 1, 42);
        const auto b = net.readout({{0, &stim}}, 1, 42);
        CHECK(a.winners == b.winners);
        CHECK(a.winners.size() == 10);
        CHECK(net.weight_checksum() == before);
        CHECK(net.support_size(1) == support);
    }
}

TEST_CASE("snapshot round trip") {
    for (auto backend : {Backend::Explicit, Backend::Lazy}) {
        Network a = pair_network(backend, 8);
        for (int i = 0; i < 4; ++i) a.step({{0, first_k(10)}}, true);
        std::stringstream buf;
        a.write_snapshot(buf);
        Network b = pair_network(backend, 8);
        b.read_snapshot(buf);
        CHECK(a.weight_checksum() == b.weight_checksum());
        CHECK(a.support_size(1) == b.support_size(1));
        Network c = pair_network(backend == Backend::Lazy ? Backend::Explicit : Backend::Lazy, 8);
        std::stringstream again;
        a.write_snapshot(again);
        CHECK_THROWS_AS(c.read_snapshot(again), nemo::Error);
    }
}

TEST_CASE("invalid use is rejected") {
    Network net = pair_network(Backend::Explicit, 1);
    CHECK_THROWS_AS(net.add_area({"S", 10, 2, 0.1, 0.1}), nemo::Error);
    CHECK_THROWS_AS(net.add_connectome(0, 1), nemo::Error);
    CHECK_THROWS_AS(net.add_connectome(0, 9), nemo::Error);
    CHECK_THROWS_AS(net.step({{0, first_k(9)}}, true), nemo::Error);
    CHECK_THROWS_AS(net.step({{0, nemo::Winners{3, 1, 2, 4, 5, 6, 7, 8, 9, 10}}}, true),
                    nemo::Error);
    CHECK_THROWS_AS(net.set_firing(0, first_k(11)), nemo::Error);
    CHECK_THROWS_AS(net.set_firing(0, nemo::Winners{500}), nemo::Error);
    CHECK_THROWS_AS(net.add_area({"X", 10, 20, 0.1, 0.1}), nemo::Error);
}

TEST_CASE("a clamp does not depend on the weights") {
    Network a = pair_network(Backend::Explicit, 2);
    Network b = pair_network(Backend::Explicit, 2);
    for (const auto& l : b.links()) {
        auto t = l.connectome->triples();
        for (std::size_t i = 0; i < t.size(); ++i) t[i].weight = 1.0 + static_cast<double>(i % 13);
        l.connectome->assign(t);
    }
    const auto clamp = first_k(10, 33);
    for (Network* net : {&a, &b}) {
        net->set_firing(0, first_k(10));
        net->set_firing(1, first_k(10, 90));
        CHECK(net->step({{1, clamp}}, true).winners[1] == clamp);
    }
}

}
