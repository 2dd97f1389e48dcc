#include <cqmono/structure.hh>

#include <map>
#include <numeric>
#include <utility>
#include <unordered_map>

using std::size_t;
using std::vector;

namespace cqmono
{
    namespace
    {
        class UnionFind
        {
            private:
                vector<size_t> _parent;
                vector<size_t> _rank;

            public:
                explicit UnionFind(size_t n) :
                    _parent(n),
                    _rank(n, 0)
                {
                    std::iota(_parent.begin(), _parent.end(), 0);
                }

                auto find(size_t x) -> size_t
                {
                    size_t root = x;
                    while (_parent[root] != root)
                        root = _parent[root];
                    while (_parent[x] != root)
                        x = std::exchange(_parent[x], root);
                    return root;
                }

                auto unite(size_t a, size_t b) -> void
                {
                    a = find(a);
                    b = find(b);
                    if (a == b)
                        return;
                    if (_rank[a] < _rank[b])
                        std::swap(a, b);
                    _parent[b] = a;
                    if (_rank[a] == _rank[b])
                        ++_rank[a];
                }
        };
    }

    auto components(const FactSet & fs) -> ComponentPartition
    {
        // elements are the facts themselves; facts sharing a symbol are united
        UnionFind sets{fs.size()};
        std::unordered_map<Symbol, size_t> first_fact_with;
        for (size_t i = 0 ; i < fs.size() ; ++i)
            for (auto & a : fs[i].args) {
                auto [it, inserted] = first_fact_with.emplace(a, i);
                if (! inserted)
                    sets.unite(it->second, i);
            }

        // facts are sorted, so the first fact seen per root is the component's smallest
        std::map<size_t, size_t> slot_of_root;
        vector<vector<Atom>> grouped;
        for (size_t i = 0 ; i < fs.size() ; ++i) {
            auto [it, inserted] = slot_of_root.emplace(sets.find(i), grouped.size());
            if (inserted)
                grouped.emplace_back();
            grouped[it->second].push_back(fs[i]);
        }

        ComponentPartition result;
        for (auto & g : grouped)
            result.components.emplace_back(std::move(g));
        return result;
    }

    auto is_connected(const FactSet & fs) -> bool
    {
        return components(fs).size() == 1;
    }

    auto is_additive_syntactic(const Query & q) -> bool
    {
        return is_connected(q.body) && q.unsafe_variables().empty();
    }
}
