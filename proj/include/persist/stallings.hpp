#pragma once

// Folded core graphs (Stallings graphs) of finitely generated subgroups of
// F(a, b).
//
// A CoreGraph is deterministic and co-deterministic: every vertex has at most
// one outgoing and at most one incoming edge per label.  Graphs built by this
// module are canonically numbered: the base is vertex 0 and the remaining
// vertices appear in breadth-first order (out a, in a, out b, in b).

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "integer.hpp"
#include "perm.hpp"
#include "words.hpp"

namespace persist {

  using Vertex = std::uint32_t;
  inline constexpr Vertex no_vertex = std::numeric_limits<Vertex>::max();

  // Upper bound on the number of letters expanded into explicit edges.
  inline constexpr std::size_t max_graph_letters = 50'000'000;

  struct Edge {
    Vertex source;
    Gen label;
    Vertex target;

    friend bool operator==(Edge const&, Edge const&) = default;
  };

  class CoreGraph {
   public:
    CoreGraph() : CoreGraph(1, 0) {}

    CoreGraph(std::size_t num_vertices, Vertex base)
        : _out(num_vertices, {no_vertex, no_vertex}),
          _in(num_vertices, {no_vertex, no_vertex}),
          _base(base) {
      if (base >= num_vertices) {
        throw DomainError("base vertex out of range");
      }
    }

    std::size_t num_vertices() const noexcept {
      return _out.size();
    }

    std::size_t num_edges() const noexcept {
      std::size_t n = 0;
      for (auto const& o : _out) {
        n += (o[0] != no_vertex) + (o[1] != no_vertex);
      }
      return n;
    }

    Vertex base() const noexcept {
      return _base;
    }

    Vertex target(Vertex v, Gen g) const noexcept {
      return _out[v][index(g)];
    }

    Vertex source(Vertex v, Gen g) const noexcept {
      return _in[v][index(g)];
    }

    Vertex add_vertex() {
      _out.push_back({no_vertex, no_vertex});
      _in.push_back({no_vertex, no_vertex});
      return static_cast<Vertex>(_out.size() - 1);
    }

    // Adds s --g--> t; the graph must stay folded.
    void add_edge(Vertex s, Gen g, Vertex t) {
      auto l = index(g);
      if (s >= num_vertices() || t >= num_vertices()) {
        throw DomainError("edge endpoint out of range");
      }
      if (_out[s][l] != no_vertex || _in[t][l] != no_vertex) {
        throw DomainError("edge would make the graph unfolded");
      }
      _out[s][l] = t;
      _in[t][l] = s;
    }

    std::size_t degree(Vertex v) const noexcept {
      std::size_t d = 0;
      for (std::size_t l = 0; l < 2; ++l) {
        d += (_out[v][l] != no_vertex) + (_in[v][l] != no_vertex);
      }
      return d;
    }

    // First Betti number E - V + 1 of a connected graph.
    std::size_t rank() const noexcept {
      return num_edges() + 1 - num_vertices();
    }

    std::vector<Edge> edges() const {
      std::vector<Edge> result;
      for (Vertex v = 0; v < num_vertices(); ++v) {
        for (Gen g : {Gen::a, Gen::b}) {
          if (target(v, g) != no_vertex) {
            result.push_back({v, g, target(v, g)});
          }
        }
      }
      return result;
    }

    bool is_connected() const {
      std::vector<bool> seen(num_vertices(), false);
      std::vector<Vertex> stack{_base};
      seen[_base]   = true;
      std::size_t n = 1;
      while (!stack.empty()) {
        Vertex v = stack.back();
        stack.pop_back();
        for (std::size_t l = 0; l < 2; ++l) {
          for (Vertex w : {_out[v][l], _in[v][l]}) {
            if (w != no_vertex && !seen[w]) {
              seen[w] = true;
              ++n;
              stack.push_back(w);
            }
          }
        }
      }
      return n == num_vertices();
    }

    bool is_core() const {
      for (Vertex v = 0; v < num_vertices(); ++v) {
        if (v != _base && degree(v) < 2) {
          return false;
        }
      }
      return is_connected();
    }

    // Every vertex has all four edge slots filled.
    bool is_cover() const {
      for (Vertex v = 0; v < num_vertices(); ++v) {
        if (degree(v) != 4) {
          return false;
        }
      }
      return true;
    }

    // Follows w from `from`; nullopt when the path leaves the graph.  Long
    // monochromatic runs are shortened modulo the cycle they wind around, so
    // the cost does not depend on the size of exponents.
    std::optional<Vertex> trace(Vertex from, Word const& w) const {
      Vertex v = from;
      for (auto const& s : w.syllables()) {
        auto l   = index(s.gen);
        bool fwd = s.exp > 0;
        Int remaining = persist::abs(s.exp);
        Vertex start  = v;
        std::size_t steps = 0;
        while (remaining > 0) {
          Vertex next = fwd ? _out[v][l] : _in[v][l];
          if (next == no_vertex) {
            return std::nullopt;
          }
          v = next;
          --remaining;
          ++steps;
          if (v == start && remaining > 0) {
            remaining %= steps;
          }
        }
      }
      return v;
    }

    friend bool operator==(CoreGraph const&, CoreGraph const&) = default;

   private:
    std::vector<std::array<Vertex, 2>> _out;
    std::vector<std::array<Vertex, 2>> _in;
    Vertex _base;
  };

  ////////////////////////////////////////////////////////////////////////
  // Canonical form and trimming
  ////////////////////////////////////////////////////////////////////////

  // Renumbers breadth-first from the base; drops vertices not reachable.
  inline CoreGraph canonicalize(CoreGraph const& g) {
    std::vector<Vertex> label(g.num_vertices(), no_vertex);
    std::vector<Vertex> order{g.base()};
    label[g.base()] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
      Vertex v = order[i];
      for (Gen x : {Gen::a, Gen::b}) {
        for (Vertex w : {g.target(v, x), g.source(v, x)}) {
          if (w != no_vertex && label[w] == no_vertex) {
            label[w] = static_cast<Vertex>(order.size());
            order.push_back(w);
          }
        }
      }
    }
    CoreGraph result(order.size(), 0);
    for (Vertex v : order) {
      for (Gen x : {Gen::a, Gen::b}) {
        Vertex w = g.target(v, x);
        if (w != no_vertex && label[w] != no_vertex) {
          result.add_edge(label[v], x, label[w]);
        }
      }
    }
    return result;
  }

  // Removes hanging trees (non-base vertices of degree <= 1, repeatedly) and
  // returns the canonically numbered core.
  inline CoreGraph trim(CoreGraph const& g) {
    std::size_t n = g.num_vertices();
    std::vector<std::array<Vertex, 2>> out(n), in(n);
    for (Vertex v = 0; v < n; ++v) {
      for (Gen x : {Gen::a, Gen::b}) {
        out[v][index(x)] = g.target(v, x);
        in[v][index(x)]  = g.source(v, x);
      }
    }
    auto deg = [&](Vertex v) {
      std::size_t d = 0;
      for (std::size_t l = 0; l < 2; ++l) {
        d += (out[v][l] != no_vertex) + (in[v][l] != no_vertex);
      }
      return d;
    };
    std::vector<Vertex> stack;
    for (Vertex v = 0; v < n; ++v) {
      if (v != g.base() && deg(v) <= 1) {
        stack.push_back(v);
      }
    }
    while (!stack.empty()) {
      Vertex v = stack.back();
      stack.pop_back();
      if (v == g.base() || deg(v) != 1) {
        continue;
      }
      for (std::size_t l = 0; l < 2; ++l) {
        if (Vertex w = out[v][l]; w != no_vertex) {
          out[v][l] = no_vertex;
          in[w][l]  = no_vertex;
          stack.push_back(w);
        }
        if (Vertex w = in[v][l]; w != no_vertex) {
          in[v][l]  = no_vertex;
          out[w][l] = no_vertex;
          stack.push_back(w);
        }
      }
    }
    CoreGraph h(n, g.base());
    for (Vertex v = 0; v < n; ++v) {
      for (std::size_t l = 0; l < 2; ++l) {
        if (out[v][l] != no_vertex) {
          h.add_edge(v, static_cast<Gen>(l), out[v][l]);
        }
      }
    }
    return canonicalize(h);
  }

  ////////////////////////////////////////////////////////////////////////
  // Folding
  ////////////////////////////////////////////////////////////////////////

  namespace detail {

    // Incremental folding with union-find.  Edge insertions that clash with
    // an existing edge of the same label at a shared endpoint trigger a
    // merge of the other endpoints; merges re-insert the absorbed vertex's
    // edges through the same queue.
    class Folder {
     public:
      explicit Folder(std::size_t reserve = 16) {
        _parent.reserve(reserve);
      }

      Vertex add_vertex() {
        _parent.push_back(static_cast<Vertex>(_parent.size()));
        _out.push_back({no_vertex, no_vertex});
        _in.push_back({no_vertex, no_vertex});
        return static_cast<Vertex>(_parent.size() - 1);
      }

      Vertex find(Vertex v) {
        while (_parent[v] != v) {
          _parent[v] = _parent[_parent[v]];
          v          = _parent[v];
        }
        return v;
      }

      void add_edge(Vertex s, Gen g, Vertex t) {
        _queue.push_back({s, g, t});
        drain();
      }

      // Path reading w from `from`, ending at `to` (or at a new vertex when
      // to == no_vertex).  Returns the endpoint.
      Vertex add_path(Vertex from, Word const& w, Vertex to) {
        std::size_t total = to_size(w.length(), max_graph_letters, "path length");
        std::size_t done  = 0;
        Vertex cur        = from;
        for (auto const& s : w.syllables()) {
          std::size_t n = static_cast<std::size_t>(persist::abs(s.exp));
          for (std::size_t k = 0; k < n; ++k) {
            ++done;
            Vertex next = (done == total && to != no_vertex) ? to : add_vertex();
            if (s.exp > 0) {
              add_edge(cur, s.gen, next);
            } else {
              add_edge(next, s.gen, cur);
            }
            cur = find(next);
          }
        }
        return cur;
      }

      CoreGraph result(Vertex base) {
        base = find(base);
        std::vector<Vertex> roots_index(_parent.size(), no_vertex);
        std::size_t m = 0;
        for (Vertex v = 0; v < _parent.size(); ++v) {
          if (find(v) == v) {
            roots_index[v] = static_cast<Vertex>(m++);
          }
        }
        CoreGraph g(m, roots_index[base]);
        for (Vertex v = 0; v < _parent.size(); ++v) {
          if (find(v) != v) {
            continue;
          }
          for (std::size_t l = 0; l < 2; ++l) {
            if (_out[v][l] != no_vertex) {
              g.add_edge(roots_index[v], static_cast<Gen>(l),
                         roots_index[find(_out[v][l])]);
            }
          }
        }
        return trim(g);
      }

     private:
      void unite(Vertex u, Vertex v) {
        u = find(u);
        v = find(v);
        if (u == v) {
          return;
        }
        if (u > v) {
          std::swap(u, v);
        }
        _parent[v] = u;
        for (std::size_t l = 0; l < 2; ++l) {
          if (_out[v][l] != no_vertex) {
            _queue.push_back({u, static_cast<Gen>(l), _out[v][l]});
            _out[v][l] = no_vertex;
          }
          if (_in[v][l] != no_vertex) {
            _queue.push_back({_in[v][l], static_cast<Gen>(l), u});
            _in[v][l] = no_vertex;
          }
        }
      }

      void drain() {
        while (!_queue.empty()) {
          Edge e = _queue.front();
          _queue.pop_front();
          Vertex s  = find(e.source);
          Vertex t  = find(e.target);
          auto l    = index(e.label);
          Vertex o  = _out[s][l] == no_vertex ? no_vertex : find(_out[s][l]);
          Vertex i  = _in[t][l] == no_vertex ? no_vertex : find(_in[t][l]);
          if (o != no_vertex && o != t) {
            unite(o, t);
            _queue.push_back({s, e.label, t});
          } else if (i != no_vertex && i != s) {
            unite(i, s);
            _queue.push_back({s, e.label, t});
          } else {
            _out[s][l] = t;
            _in[t][l]  = s;
          }
        }
      }

      std::vector<Vertex> _parent;
      std::vector<std::array<Vertex, 2>> _out;
      std::vector<std::array<Vertex, 2>> _in;
      std::deque<Edge> _queue;
    };

  }  // namespace detail

  // Folded based core graph of <gens>.
  inline CoreGraph from_generators(std::span<Word const> gens) {
    detail::Folder folder;
    Vertex base = folder.add_vertex();
    for (auto const& w : gens) {
      if (!w.is_identity()) {
        folder.add_path(base, w, base);
      }
    }
    return folder.result(base);
  }

  inline CoreGraph from_generators(std::initializer_list<Word> gens) {
    return from_generators(std::span<Word const>(gens.begin(), gens.size()));
  }

  inline bool membership(CoreGraph const& g, Word const& w) {
    auto end = g.trace(g.base(), w);
    return end && *end == g.base();
  }

  ////////////////////////////////////////////////////////////////////////
  // Spanning tree basis
  ////////////////////////////////////////////////////////////////////////

  class SpanningTree {
   public:
    static constexpr std::size_t tree_edge = std::numeric_limits<std::size_t>::max();

    explicit SpanningTree(CoreGraph const& g) : _edge_index(g.num_vertices(), {tree_edge, tree_edge}) {
      std::size_t n = g.num_vertices();
      _path.assign(n, Word());
      std::vector<bool> seen(n, false);
      std::vector<std::array<bool, 2>> in_tree(n, {false, false});
      std::vector<Vertex> order{g.base()};
      seen[g.base()] = true;
      for (std::size_t i = 0; i < order.size(); ++i) {
        Vertex v = order[i];
        for (Gen x : {Gen::a, Gen::b}) {
          Vertex w = g.target(v, x);
          if (w != no_vertex && !seen[w]) {
            seen[w]           = true;
            in_tree[v][index(x)] = true;
            _path[w]          = _path[v] * Word(x, 1);
            order.push_back(w);
          }
          Vertex u = g.source(v, x);
          if (u != no_vertex && !seen[u]) {
            seen[u]           = true;
            in_tree[u][index(x)] = true;
            _path[u]          = _path[v] * Word(x, -1);
            order.push_back(u);
          }
        }
      }
      for (Vertex v = 0; v < n; ++v) {
        for (Gen x : {Gen::a, Gen::b}) {
          Vertex w = g.target(v, x);
          if (w != no_vertex && !in_tree[v][index(x)]) {
            _edge_index[v][index(x)] = _basis.size();
            _basis.push_back(_path[v] * Word(x, 1) * _path[w].inverse());
          }
        }
      }
    }

    // Basis index of the edge leaving v with label x, or tree_edge.
    std::size_t edge_index(Vertex v, Gen x) const noexcept {
      return _edge_index[v][index(x)];
    }

    Word const& path(Vertex v) const noexcept {
      return _path[v];
    }

    std::vector<Word> const& basis() const noexcept {
      return _basis;
    }

   private:
    std::vector<Word> _path;
    std::vector<std::array<std::size_t, 2>> _edge_index;
    std::vector<Word> _basis;
  };

  using BasisWord = std::vector<std::pair<std::size_t, Int>>;

  namespace detail {
    inline void push_basis_letter(BasisWord& out, std::size_t i, Int const& e) {
      if (e == 0) {
        return;
      }
      if (!out.empty() && out.back().first == i) {
        out.back().second += e;
        if (out.back().second == 0) {
          out.pop_back();
        }
      } else {
        out.emplace_back(i, e);
      }
    }
  }  // namespace detail

  // Factorization of w in the spanning-tree basis, if w is in the subgroup.
  inline std::optional<BasisWord> express(CoreGraph const& g,
                                          SpanningTree const& tree,
                                          Word const& w) {
    BasisWord out;
    Vertex v = g.base();
    for (auto const& s : w.syllables()) {
      Gen x      = s.gen;
      bool fwd   = s.exp > 0;
      Int remaining = persist::abs(s.exp);
      Vertex start  = v;
      std::size_t steps = 0;
      BasisWord lap;  // crossings made since this syllable started
      while (remaining > 0) {
        Vertex next;
        std::size_t idx;
        if (fwd) {
          next = g.target(v, x);
          if (next == no_vertex) {
            return std::nullopt;
          }
          idx = tree.edge_index(v, x);
        } else {
          next = g.source(v, x);
          if (next == no_vertex) {
            return std::nullopt;
          }
          idx = tree.edge_index(next, x);
        }
        if (idx != SpanningTree::tree_edge) {
          detail::push_basis_letter(lap, idx, fwd ? Int(1) : Int(-1));
        }
        v = next;
        --remaining;
        ++steps;
        if (v == start && remaining > 0) {
          // One full lap done: the remaining laps repeat `lap`.
          Int laps  = remaining / steps;
          remaining = remaining % steps;
          BasisWord one = lap;
          if (one.size() == 1) {
            lap.front().second *= (laps + 1);
          } else if (!one.empty()) {
            std::size_t n = to_size(laps, max_graph_letters, "express laps");
            for (std::size_t k = 0; k < n; ++k) {
              for (auto const& [i, e] : one) {
                detail::push_basis_letter(lap, i, e);
              }
            }
          }
        }
      }
      for (auto const& [i, e] : lap) {
        detail::push_basis_letter(out, i, e);
      }
    }
    if (v != g.base()) {
      return std::nullopt;
    }
    return out;
  }

  inline std::optional<BasisWord> express(CoreGraph const& g, Word const& w) {
    return express(g, SpanningTree(g), w);
  }

  inline std::vector<Word> basis(CoreGraph const& g) {
    return SpanningTree(g).basis();
  }

  ////////////////////////////////////////////////////////////////////////
  // Intersections, completions, covers
  ////////////////////////////////////////////////////////////////////////

  // Core of the based component of the fiber product: the graph of the
  // intersection subgroup.
  inline CoreGraph pullback(CoreGraph const& g1, CoreGraph const& g2) {
    std::size_t n2 = g2.num_vertices();
    auto key       = [n2](Vertex u, Vertex v) {
      return static_cast<std::size_t>(u) * n2 + v;
    };
    std::unordered_map<std::size_t, Vertex> id;
    std::vector<std::pair<Vertex, Vertex>> verts{{g1.base(), g2.base()}};
    id[key(g1.base(), g2.base())] = 0;
    std::vector<Edge> edges;
    auto visit = [&](Vertex u, Vertex v) {
      auto [it, fresh] = id.emplace(key(u, v), static_cast<Vertex>(verts.size()));
      if (fresh) {
        verts.emplace_back(u, v);
      }
      return it->second;
    };
    for (std::size_t i = 0; i < verts.size(); ++i) {
      auto [u, v] = verts[i];
      for (Gen x : {Gen::a, Gen::b}) {
        Vertex tu = g1.target(u, x), tv = g2.target(v, x);
        if (tu != no_vertex && tv != no_vertex) {
          edges.push_back({static_cast<Vertex>(i), x, visit(tu, tv)});
        }
        Vertex su = g1.source(u, x), sv = g2.source(v, x);
        if (su != no_vertex && sv != no_vertex) {
          visit(su, sv);
        }
      }
    }
    CoreGraph g(verts.size(), 0);
    for (auto const& e : edges) {
      g.add_edge(e.source, e.label, e.target);
    }
    return trim(g);
  }

  // Permutation representation of F on the vertices of a finite cover; the
  // base point is vertex 0.
  struct PermRep {
    Perm a;
    Perm b;

    std::size_t degree() const noexcept {
      return a.size();
    }

    Perm const& gen(Gen g) const noexcept {
      return g == Gen::a ? a : b;
    }

    std::uint32_t act(std::uint32_t point, Word const& w) const {
      for (auto const& s : w.syllables()) {
        Perm const& p = gen(s.gen);
        Int e         = s.exp;
        // Reduce modulo the cycle length through `point`.
        std::uint32_t x = point;
        std::size_t len = 0;
        do {
          x = p[x];
          ++len;
        } while (x != point);
        Int k = mod(e, Int(static_cast<unsigned long long>(len)));
        std::size_t steps = static_cast<std::size_t>(k);
        for (std::size_t i = 0; i < steps; ++i) {
          point = p[point];
        }
      }
      return point;
    }

    Perm image(Word const& w) const {
      Perm r = identity_perm(degree());
      for (auto const& s : w.syllables()) {
        r = compose(r, power(gen(s.gen), s.exp));
      }
      return r;
    }

    bool valid() const {
      return a.size() == b.size() && !a.empty() && is_permutation(a)
             && is_permutation(b);
    }

    friend bool operator==(PermRep const&, PermRep const&) = default;
  };

  struct Completion {
    CoreGraph cover;
    PermRep rep;
  };

  // Finite cover containing g: each label's partial injection is completed
  // by pairing the vertices lacking an outgoing edge with those lacking an
  // incoming edge in increasing index order.
  inline Completion completion(CoreGraph const& g) {
    CoreGraph c = g;
    for (Gen x : {Gen::a, Gen::b}) {
      std::vector<Vertex> no_out, no_in;
      for (Vertex v = 0; v < c.num_vertices(); ++v) {
        if (c.target(v, x) == no_vertex) {
          no_out.push_back(v);
        }
        if (c.source(v, x) == no_vertex) {
          no_in.push_back(v);
        }
      }
      for (std::size_t i = 0; i < no_out.size(); ++i) {
        c.add_edge(no_out[i], x, no_in[i]);
      }
    }
    Completion result{c, {}};
    result.rep.a.resize(c.num_vertices());
    result.rep.b.resize(c.num_vertices());
    for (Vertex v = 0; v < c.num_vertices(); ++v) {
      result.rep.a[v] = c.target(v, Gen::a);
      result.rep.b[v] = c.target(v, Gen::b);
    }
    return result;
  }

  // If w's path from the base leaves g, attaches the unread suffix of w as a
  // new hanging path.  The subgroup is unchanged.  Vertex numbering of g is
  // kept; new vertices are appended.
  inline CoreGraph extend_by_path(CoreGraph const& g, Word const& w) {
    CoreGraph h = g;
    Vertex v    = h.base();
    auto syl    = w.syllables();
    for (std::size_t si = 0; si < syl.size(); ++si) {
      Gen x         = syl[si].gen;
      bool fwd      = syl[si].exp > 0;
      Int remaining = persist::abs(syl[si].exp);
      Vertex start  = v;
      std::size_t steps = 0;
      while (remaining > 0) {
        Vertex next = fwd ? h.target(v, x) : h.source(v, x);
        if (next == no_vertex) {
          // Attach the rest: remaining letters of this syllable and all later
          // syllables, on fresh vertices.
          Word rest(x, fwd ? remaining : Int(-remaining));
          for (std::size_t sj = si + 1; sj < syl.size(); ++sj) {
            rest.append(syl[sj].gen, syl[sj].exp);
          }
          to_size(rest.length(), max_graph_letters, "hanging path length");
          for (auto const& s : rest.syllables()) {
            std::size_t n = static_cast<std::size_t>(persist::abs(s.exp));
            for (std::size_t k = 0; k < n; ++k) {
              Vertex fresh = h.add_vertex();
              if (s.exp > 0) {
                h.add_edge(v, s.gen, fresh);
              } else {
                h.add_edge(fresh, s.gen, v);
              }
              v = fresh;
            }
          }
          return h;
        }
        v = next;
        --remaining;
        ++steps;
        if (v == start && remaining > 0) {
          remaining %= steps;
        }
      }
    }
    return h;
  }

  // Connected double cover of g along chi: basis edge i crosses sheets iff
  // chi[i] = 1.  Its subgroup is the kernel of the induced map to Z/2.
  inline CoreGraph double_cover(CoreGraph const& g, std::span<std::uint8_t const> chi) {
    SpanningTree tree(g);
    if (chi.size() != tree.basis().size()) {
      throw DomainError("chi must assign a value to every basis element");
    }
    bool nontrivial = false;
    for (auto c : chi) {
      nontrivial = nontrivial || (c & 1);
    }
    if (!nontrivial) {
      throw DomainError("chi is identically zero: the double cover is disconnected");
    }
    std::size_t n = g.num_vertices();
    CoreGraph h(2 * n, g.base());
    for (Vertex v = 0; v < n; ++v) {
      for (Gen x : {Gen::a, Gen::b}) {
        Vertex w = g.target(v, x);
        if (w == no_vertex) {
          continue;
        }
        std::size_t i = tree.edge_index(v, x);
        bool cross    = i != SpanningTree::tree_edge && (chi[i] & 1);
        for (Vertex sheet = 0; sheet < 2; ++sheet) {
          Vertex other = cross ? 1 - sheet : sheet;
          h.add_edge(v + sheet * n, x, w + other * n);
        }
      }
    }
    return trim(h);
  }

  ////////////////////////////////////////////////////////////////////////
  // Text format
  ////////////////////////////////////////////////////////////////////////

  // `vertices m base k` then one `src label dst` line per edge, ordered by
  // source then label.
  inline std::string to_text(CoreGraph const& g) {
    std::ostringstream os;
    os << "vertices " << g.num_vertices() << " base " << g.base() << '\n';
    for (auto const& e : g.edges()) {
      os << e.source << ' ' << (e.label == Gen::a ? 'a' : 'b') << ' ' << e.target
         << '\n';
    }
    return os.str();
  }

  inline CoreGraph parse_graph(std::string const& text) {
    std::istringstream is(text);
    std::string kw1, kw2;
    std::size_t m = 0, base = 0;
    if (!(is >> kw1 >> m >> kw2 >> base) || kw1 != "vertices" || kw2 != "base") {
      throw ParseError("graph header must be 'vertices m base k'");
    }
    if (m == 0 || base >= m) {
      throw ParseError("graph header out of range");
    }
    CoreGraph g(m, static_cast<Vertex>(base));
    std::size_t s, t;
    std::string label;
    while (is >> s) {
      if (!(is >> label >> t) || (label != "a" && label != "b") || s >= m || t >= m) {
        throw ParseError("bad edge line in graph");
      }
      try {
        g.add_edge(static_cast<Vertex>(s), label == "a" ? Gen::a : Gen::b,
                   static_cast<Vertex>(t));
      } catch (DomainError const& e) {
        throw ParseError(std::string("graph is not folded: ") + e.what());
      }
    }
    if (!is.eof()) {
      throw ParseError("trailing garbage in graph");
    }
    return g;
  }

}  // namespace persist
