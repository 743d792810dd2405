#include <percolab/cube.hpp>
#include <percolab/events.hpp>

#include <catch_amalgamated.hpp>

using namespace percolab;

namespace {
Configuration random_config(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    Configuration w(n);
    for (std::size_t i = 0; i < n; ++i) w.set(i, rng.uniform(0, i) < 0.5);
    return w;
}
} // namespace

TEST_CASE("flip_up basics") {
    Configuration zeros(8);
    const Configuration up = flip_up(zeros, 0);
    CHECK(up.get(0));
    CHECK(up.count() == 1);
    CHECK(zeros.count() == 0);  // input untouched

    Configuration ones(8, true);
    CHECK(flip_up(ones, 3) == ones);  // idempotent on an open element

    Configuration w(12);
    w.set(1, true);
    w.set(7, true);
    const Configuration v = flip_up(w, 3);
    CHECK(v.get(3));
    std::size_t hamming = 0;
    for (std::size_t i = 0; i < 12; ++i) hamming += v.get(i) != w.get(i);
    CHECK(hamming == 1);
}

TEST_CASE("flip_down basics and composition") {
    Configuration ones(8, true);
    const Configuration down = flip_down(ones, 0);
    CHECK_FALSE(down.get(0));
    CHECK(down.count() == 7);

    Configuration zeros(8);
    CHECK(flip_down(zeros, 5) == zeros);

    const Configuration w = random_config(10, 99);
    for (std::size_t e = 0; e < 10; ++e)
        CHECK(flip_down(flip_up(w, e), e) == flip_down(w, e));
}

TEST_CASE("flip algebra: idempotence and ordering") {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const Configuration w = random_config(70, s);  // multi-word
        for (std::size_t e : {std::size_t{0}, std::size_t{31}, std::size_t{64}, std::size_t{69}}) {
            CHECK(flip_up(flip_up(w, e), e) == flip_up(w, e));
            CHECK(flip_down(flip_down(w, e), e) == flip_down(w, e));
            CHECK(w.leq(flip_up(w, e)));
            CHECK(flip_down(w, e).leq(w));
        }
    }
}

TEST_CASE("element out of range") {
    Configuration w(6);
    CHECK_THROWS_AS(flip_up(w, 6), std::domain_error);
    CHECK_THROWS_AS(flip_down(w, 100), std::domain_error);
    CHECK_THROWS_AS(is_pivotal(dictator_event(0), w, 6), std::domain_error);
}

TEST_CASE("pivotality of named events") {
    const auto dict = dictator_event(0);
    const auto full = full_event();
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
        const Configuration w = Configuration::from_index(3, idx);
        CHECK(is_pivotal(dict, w, 0));
        CHECK_FALSE(is_pivotal(dict, w, 1));
        CHECK_FALSE(is_pivotal(dict, w, 2));
        for (std::size_t e = 0; e < 3; ++e) CHECK_FALSE(is_pivotal(full, w, e));
    }

    // majority-of-3 at (1,0,0): element 1 toggles the event
    const auto maj = majority3_event();
    Configuration w(3);
    w.set(0, true);
    CHECK(is_pivotal(maj, w, 1));
    CHECK(is_pivotal(maj, w, 2));
    CHECK_FALSE(is_pivotal(maj, w, 0));
}

TEST_CASE("pivotality does not depend on the element's own state") {
    const auto maj = majority3_event();
    const auto rnd = random_increasing_event(8, 5, 7);
    for (std::uint64_t idx = 0; idx < 256; ++idx) {
        const Configuration w = Configuration::from_index(8, idx);
        for (std::size_t e = 0; e < 8; ++e) {
            const bool piv = is_pivotal(rnd, w, e);
            CHECK(is_pivotal(rnd, flip_up(w, e), e) == piv);
            CHECK(is_pivotal(rnd, flip_down(w, e), e) == piv);
        }
    }
    for (std::uint64_t idx = 0; idx < 8; ++idx) {
        const Configuration w = Configuration::from_index(3, idx);
        for (std::size_t e = 0; e < 3; ++e)
            CHECK(is_pivotal(maj, flip_up(w, e), e) == is_pivotal(maj, w, e));
    }
}

TEST_CASE("increasing events: pivotal inside the event forces the element open") {
    for (std::uint64_t s = 0; s < 10; ++s) {
        const auto ev = random_increasing_event(8, 6, 100 + s);
        for (std::uint64_t idx = 0; idx < 256; ++idx) {
            const Configuration w = Configuration::from_index(8, idx);
            if (!ev(w)) continue;
            for (std::size_t e = 0; e < 8; ++e)
                if (is_pivotal(ev, w, e)) CHECK(w.get(e));
        }
    }
}

TEST_CASE("check_increasing exhaustive accepts exactly the increasing predicates") {
    CHECK(check_increasing(dictator_event(2), 5, 1 << 5).passed);
    CHECK(check_increasing(empty_event(), 4, 1 << 4).passed);
    CHECK(check_increasing(full_event(), 4, 1 << 4).passed);
    CHECK(check_increasing(majority3_event(), 3, 8).passed);
    for (std::uint64_t s = 0; s < 20; ++s)
        CHECK(check_increasing(random_increasing_event(10, 8, s), 10, 1 << 10).passed);

    const auto res = check_increasing(parity_event(), 3, 8);
    CHECK(res.exhaustive);
    CHECK_FALSE(res.passed);
    REQUIRE(res.counterexample.has_value());
    const auto& [lo, hi] = *res.counterexample;
    CHECK(lo.leq(hi));
    CHECK(parity_event()(lo));
    CHECK_FALSE(parity_event()(hi));

    // exactly-k is not increasing either
    MonotoneEvent exactly2{"exactly2", [](const Configuration& w) { return w.count() == 2; },
                           true};
    CHECK_FALSE(check_increasing(exactly2, 5, 1 << 5).passed);
}

TEST_CASE("check_increasing randomized mode finds gross violations") {
    const auto res = check_increasing(parity_event(), 40, 20000, 5);
    CHECK_FALSE(res.exhaustive);
    CHECK_FALSE(res.passed);
    CHECK(check_increasing(dictator_event(7), 40, 2000, 5).passed);
    CHECK_THROWS_AS(check_increasing(dictator_event(0), 4, 0), std::invalid_argument);
}

TEST_CASE("ground set invariants") {
    CHECK_THROWS_AS(GroundSet(0), std::invalid_argument);
    CHECK_THROWS_AS(GroundSet(3, {"a", "b"}), std::invalid_argument);
    const GroundSet gs(2, {"a", "b"});
    CHECK(gs.size == 2);
}
