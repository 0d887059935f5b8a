#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <set>
#include <sstream>
#include <vector>

#include "pilotshare/io.hpp"
#include "pilotshare/partition.hpp"
#include "pilotshare/rng.hpp"

using namespace pilotshare;

TEST_SUITE_BEGIN("partition");

TEST_CASE("construction canonicalizes arbitrary labels") {
    const CoalitionStructure a(std::vector<int>{7, 7, 2, 7, 2});
    CHECK(a.labels() == std::vector<int>{0, 0, 1, 0, 1});
    CHECK(a.num_blocks() == 2);
    CHECK(a == CoalitionStructure(std::vector<int>{0, 0, 1, 0, 1}));
    CHECK(a.coalition_size_of(2) == 2);
    CHECK(a.coalition_of(0) == std::vector<std::size_t>{0, 1, 3});
    CHECK(a.block_members(1) == std::vector<std::size_t>{2, 4});
    CHECK(a.block_sizes() == std::vector<std::size_t>{3, 2});
}

TEST_CASE("singletons and grand are the extreme partitions") {
    const auto s = CoalitionStructure::singletons(4);
    CHECK(s.num_blocks() == 4);
    CHECK(s.labels() == std::vector<int>{0, 1, 2, 3});
    const auto g = CoalitionStructure::grand(4);
    CHECK(g.num_blocks() == 1);
    CHECK(g.coalition_size_of(2) == 4);
}

TEST_CASE("deviations move one cell and stay canonical") {
    // {0,1},{2}: cell 2 joins {0,1} -> grand
    const CoalitionStructure c(std::vector<int>{0, 0, 1});
    CHECK(c.deviate(2, 0) == CoalitionStructure::grand(3));

    // grand: cell 1 leaves to a fresh singleton -> {0,2},{1}
    const CoalitionStructure g = CoalitionStructure::grand(3);
    CHECK(g.deviate(1, kEmptyCoalition) ==
          CoalitionStructure(std::vector<int>{0, 1, 0}));

    // {0},{1}: cell 0 joins {1} -> grand
    const CoalitionStructure s = CoalitionStructure::singletons(2);
    CHECK(s.deviate(0, 1) == CoalitionStructure::grand(2));

    // the source block disappears when emptied
    const CoalitionStructure d(std::vector<int>{0, 1, 1});
    const CoalitionStructure after = d.deviate(0, 1);
    CHECK(after.num_blocks() == 1);
}

TEST_CASE("a deviation must actually leave the current coalition") {
    const CoalitionStructure c(std::vector<int>{0, 0, 1});
    CHECK_THROWS_AS(c.deviate(0, 0), std::invalid_argument);
    CHECK_THROWS_AS(c.deviate(0, 5), std::invalid_argument);
    CHECK_THROWS_AS(c.deviate(0, -7), std::invalid_argument);
}

TEST_CASE("deviate keeps untouched blocks intact") {
    Rng rng(404);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t L = 2 + uniform_below(rng, 7);
        std::vector<int> labels(L);
        for (std::size_t i = 0; i < L; ++i)
            labels[i] = static_cast<int>(uniform_below(rng, L));
        const CoalitionStructure c(labels);
        const std::size_t j = uniform_below(rng, L);
        const int own = c.label_of(j);
        std::vector<int> targets{kEmptyCoalition};
        for (int lab = 0; lab < static_cast<int>(c.num_blocks()); ++lab)
            if (lab != own) targets.push_back(lab);
        const int target = targets[uniform_below(rng, targets.size())];
        const CoalitionStructure after = c.deviate(j, target);

        // canonical-form idempotence
        CHECK(CoalitionStructure(after.labels()) == after);
        // j landed where it asked to go
        if (target == kEmptyCoalition) {
            CHECK(after.coalition_size_of(j) == 1);
        } else {
            auto members = c.block_members(target);
            members.push_back(j);
            std::sort(members.begin(), members.end());
            CHECK(after.coalition_of(j) == members);
        }
        // every block not involved in the move is unchanged
        for (std::size_t a = 0; a < L; ++a) {
            for (std::size_t b = 0; b < L; ++b) {
                if (a == j || b == j) continue;
                const bool before_same = c.label_of(a) == c.label_of(b);
                const bool after_same = after.label_of(a) == after.label_of(b);
                CHECK(before_same == after_same);
            }
        }
    }
}

TEST_CASE("enumeration yields each partition once, Bell(L) in total") {
    const std::vector<std::uint64_t> bell{1, 1, 2, 5, 15, 52, 203, 877, 4140};
    for (std::size_t L = 1; L <= 8; ++L) {
        PartitionEnumerator en(L);
        CoalitionStructure c;
        std::set<std::vector<int>> seen;
        std::size_t count = 0;
        CoalitionStructure first, last;
        while (en.next(c)) {
            if (count == 0) first = c;
            last = c;
            ++count;
            CHECK(seen.insert(c.labels()).second); // no duplicates
        }
        CHECK(count == bell[L]);
        CHECK(bell_number(L) == bell[L]);
        CHECK(first == CoalitionStructure::grand(L));
        CHECK(last == CoalitionStructure::singletons(L));
    }
}

TEST_CASE("enumeration is guarded against blow-up") {
    CHECK_THROWS_AS(PartitionEnumerator(0), std::invalid_argument);
    CHECK_THROWS_AS(PartitionEnumerator(13), std::invalid_argument);
    CHECK(bell_number(12) == 4213597);
}

TEST_CASE("structure file round-trips and canonicalizes") {
    const CoalitionStructure c(std::vector<int>{0, 1, 1, 2, 0});
    std::stringstream ss;
    write_structure(ss, c);
    CHECK(read_structure(ss) == c);

    std::stringstream noisy("# comment\nlabels 5 5 9\n");
    CHECK(read_structure(noisy) == CoalitionStructure(std::vector<int>{0, 0, 1}));
}

TEST_SUITE_END();
