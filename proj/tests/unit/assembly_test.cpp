#include "nemo/assembly.hpp"

#include <doctest.h>

using nemo::Backend;

namespace {

nemo::AreaParams target(std::size_t n, std::size_t k, double p, double beta) {
    return {"T", n, k, beta, p};
}

} // namespace

TEST_SUITE("assembly") {

TEST_CASE("overlap") {
    CHECK(nemo::overlap(nemo::Winners{1, 2, 3, 4}, nemo::Winners{3, 4, 5, 6}, 4) == 0.5);
    CHECK(nemo::overlap(nemo::Winners{1, 2}, nemo::Winners{1, 2}, 2) == 1.0);
    CHECK(nemo::overlap(nemo::Winners{}, nemo::Winners{1, 2}, 2) == 0.0);
    nemo::Assembly a{0, {1, 2, 3}, "a"}, b{0, {2, 3}, "b"}, c{1, {2, 3}, "c"};
    CHECK(nemo::overlap(a, b) == doctest::Approx(2.0 / 3.0));
    CHECK_THROWS_AS(nemo::overlap(a, c), nemo::Error);
}

TEST_CASE("random subsets are sorted k-subsets") {
    nemo::Rng rng(1);
    auto s = nemo::random_subset(100, 10, rng);
    CHECK(s.size() == 10);
    CHECK(std::is_sorted(s.begin(), s.end()));
    CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    CHECK(s.back() < 100);
    CHECK_THROWS_AS(nemo::random_subset(5, 6, rng), nemo::Error);
}

TEST_CASE("projection converges and stops at max_steps") {
    for (auto backend : {Backend::Explicit, Backend::Lazy}) {
        auto setup = nemo::make_projection_setup(target(1000, 30, 0.1, 0.1), backend, 4);
        auto r = nemo::project(setup.net, setup.stimulus, setup.target, 40);
        REQUIRE(r.trace.converged_at.has_value());
        CHECK(r.trace.overlaps.back() >= 0.95);
        CHECK(r.assembly.neurons.size() == 30);

        auto one = nemo::make_projection_setup(target(1000, 30, 0.1, 0.1), backend, 4);
        auto single = nemo::project(one.net, one.stimulus, one.target, 1);
        CHECK(single.caps.size() == 1);
        CHECK(!single.trace.converged_at.has_value());
    }
}

TEST_CASE("readout leaves the network untouched") {
    auto setup = nemo::make_projection_setup(target(1000, 30, 0.1, 0.1), Backend::Lazy, 2);
    nemo::project(setup.net, setup.stimulus, setup.target, 10);
    const auto before = setup.net.weight_checksum();
    const auto a = nemo::readout(setup.net, {setup.stimulus}, setup.target, 3);
    const auto b = nemo::readout(setup.net, {setup.stimulus}, setup.target, 3);
    CHECK(a == b);
    CHECK(setup.net.weight_checksum() == before);
    CHECK(nemo::readout(setup.net, {}, setup.target).empty());
}

TEST_CASE("projection needs a fiber") {
    nemo::Network net(Backend::Explicit, 1);
    net.add_area({"S", 50, 5, 0.1, 0.1});
    net.add_area({"T", 50, 5, 0.1, 0.1});
    nemo::Assembly s{0, {0, 1, 2, 3, 4}, "s"};
    CHECK_THROWS_AS(nemo::project(net, s, 1, 5), nemo::Error);
}

}

TEST_SUITE("pattern_completion") {

TEST_CASE("half of a converged assembly recalls three quarters of it") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto setup =
            nemo::make_projection_setup(target(10000, 100, 0.01, 0.1), Backend::Explicit, seed);
        auto r = nemo::project(setup.net, setup.stimulus, setup.target, 50);
        REQUIRE(r.trace.converged_at.has_value());
        const auto& b = r.assembly.neurons;
        nemo::Assembly half{setup.target, nemo::Winners(b.begin(), b.begin() + 50), "half"};
        const auto cap = nemo::readout(setup.net, {half}, setup.target);
        CAPTURE(seed);
        CHECK(nemo::overlap(cap, b, 100) >= 0.75);
    }
}

}
