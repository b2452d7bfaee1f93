#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

namespace hctab::programs {

inline constexpr std::string_view is_list = R"(% tabled list-walk
:- table is_list/1.
is_list([]).
is_list([_|L]) :- is_list(L).
)";

// All-solutions edit distance: delete, insert, and substitute-or-match,
// folded with min/2. Guard clauses on ==/2 and \==/2 split the match and
// substitute cases.
inline constexpr std::string_view edit = R"(:- table edit/3.
edit([],[],0).
edit([_|T],[],D) :- edit(T,[],D1), D is D1 + 1.
edit([],[_|T],D) :- edit([],T,D1), D is D1 + 1.
edit([X|T1],[Y|T2],D) :-
    X == Y,
    edit(T1,[Y|T2],D1),
    edit([X|T1],T2,D2),
    edit(T1,T2,D3),
    D is min(min(D1 + 1, D2 + 1), D3).
edit([X|T1],[Y|T2],D) :-
    X \== Y,
    edit(T1,[Y|T2],D1),
    edit([X|T1],T2,D2),
    edit(T1,T2,D3),
    D is min(min(D1 + 1, D2 + 1), D3 + 1).
)";

// Generates the prefix-sharing family [1], [1,2], ..., [1..N]; suffix
// sharing finds nothing to reuse here.
inline constexpr std::string_view create_list = R"(:- table create_list/2.
create_list(N,L) :- between(1,N,I), range(1,I,L).
)";

inline constexpr std::string_view path = R"(:- table path/2.
path(X,Y) :- edge(X,Y).
path(X,Y) :- path(X,Z), edge(Z,Y).
)";

inline std::string_view bundled(std::string_view name) {
    if (name == "is_list") return is_list;
    if (name == "edit") return edit;
    if (name == "create_list") return create_list;
    if (name == "path") return path;
    return {};
}

// Ring digraph over n0..n{N-1} with forward chords every fifth node; cyclic
// by construction.
inline std::string ring_with_chords(std::uint64_t n) {
    std::ostringstream os;
    os << path;
    for (std::uint64_t i = 0; i < n; ++i) {
        os << "edge(n" << i << ",n" << (i + 1) % n << ").\n";
        if (i % 5 == 0) os << "edge(n" << i << ",n" << (i + 17) % n << ").\n";
    }
    return os.str();
}

}  // namespace hctab::programs
