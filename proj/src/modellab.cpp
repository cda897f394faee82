#include "capcalc/modellab.hpp"

#include "capcalc/gen.hpp"
#include "capcalc/interp.hpp"
#include "capcalc/printer.hpp"
#include "capcalc/typecheck.hpp"
#include "capcalc/weights.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace capcalc::model {

namespace {

long long ipow_checked(long long base, int exp, long long cap) {
    long long r = 1;
    for (int i = 0; i < exp; ++i) {
        if (base != 0 && r > cap / base) return -1;
        r *= base;
    }
    return r;
}

void sort_dedup(std::vector<Mask>& w) {
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
}

std::vector<Mask> submasks(Mask u) {
    std::vector<Mask> out;
    Mask s = u;
    while (true) {
        out.push_back(s);
        if (s == 0) break;
        s = (s - 1) & u;
    }
    std::sort(out.begin(), out.end());
    return out;
}

SpacePtr make_space(std::string name, Mask universe, std::vector<std::vector<Mask>> weights,
                    std::vector<std::string> labels) {
    if (static_cast<long long>(weights.size()) > kSpaceBound)
        throw error("size bound exceeded building space " + name);
    for (auto& w : weights) {
        for (Mask m : w)
            if ((m & ~universe) != 0) throw error("weight outside universe in space " + name);
        sort_dedup(w);
    }
    auto sp = std::make_shared<FinSpace>();
    sp->name = std::move(name);
    sp->universe = universe;
    sp->weights = std::move(weights);
    sp->labels = std::move(labels);
    if (sp->labels.size() != sp->weights.size()) {
        sp->labels.resize(sp->weights.size());
        for (size_t i = 0; i < sp->labels.size(); ++i)
            if (sp->labels[i].empty()) sp->labels[i] = "e" + std::to_string(i);
    }
    return sp;
}

std::vector<std::string> tiny_labels(const std::string& stem, int n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
    return out;
}

} // namespace

bool FinSpace::weighted(int x, Mask c) const {
    const auto& w = weights[x];
    return std::binary_search(w.begin(), w.end(), c);
}

std::string render_mask(Mask m, const std::vector<std::string>& caps) {
    std::string out = "{";
    bool first = true;
    for (size_t i = 0; i < caps.size(); ++i) {
        if ((m & (Mask{1} << i)) == 0) continue;
        if (!first) out += ", ";
        out += caps[i];
        first = false;
    }
    return out + "}";
}

std::optional<std::string> hom_violation(const SpacePtr& dom, const SpacePtr& cod,
                                         const std::vector<int>& table) {
    if (table.size() != dom->weights.size()) return "table size does not match domain carrier";
    for (int x = 0; x < dom->size(); ++x) {
        int y = table[x];
        if (y < 0 || y >= cod->size()) return "table entry out of range";
        for (Mask cx : dom->weights[x]) {
            bool ok = false;
            for (Mask cy : cod->weights[y])
                if ((cy & ~cx) == 0) {
                    ok = true;
                    break;
                }
            if (!ok)
                return "element " + dom->labels[x] + " of " + dom->name + " weighs " +
                       std::to_string(cx) + " but image " + cod->labels[y] + " in " + cod->name +
                       " admits no smaller weight";
        }
    }
    return std::nullopt;
}

FinMap make_map(SpacePtr dom, SpacePtr cod, std::vector<int> table, const std::string& what) {
    if (auto v = hom_violation(dom, cod, table)) throw error(what + ": " + *v);
    return FinMap{std::move(dom), std::move(cod), std::move(table)};
}

FinMap compose(const FinMap& f, const FinMap& g) {
    std::vector<int> t(f.table.size());
    for (size_t i = 0; i < t.size(); ++i) t[i] = g.table[f.table[i]];
    return FinMap{f.dom, g.cod, std::move(t)};
}

FinMap identity_map(const SpacePtr& a) {
    std::vector<int> t(a->size());
    for (int i = 0; i < a->size(); ++i) t[i] = i;
    return FinMap{a, a, std::move(t)};
}

bool map_equal(const FinMap& f, const FinMap& g) { return f.table == g.table; }

std::vector<std::vector<int>> enumerate_homs(const SpacePtr& dom, const SpacePtr& cod,
                                             long long bound) {
    std::vector<std::vector<int>> out;
    if (dom->size() == 0) {
        out.push_back({});
        return out;
    }
    if (cod->size() == 0) return out;
    long long total = ipow_checked(cod->size(), dom->size(), bound);
    if (total < 0)
        throw error("hom enumeration bound exceeded for " + dom->name + " -> " + cod->name);
    std::vector<int> table(dom->size(), 0);
    while (true) {
        if (!hom_violation(dom, cod, table)) out.push_back(table);
        int i = 0;
        while (i < dom->size()) {
            if (++table[i] < cod->size()) break;
            table[i] = 0;
            ++i;
        }
        if (i == dom->size()) break;
    }
    return out;
}

bool FinMonoid::commutative() const {
    for (int a = 0; a < size; ++a)
        for (int b = 0; b < size; ++b)
            if (mul[a][b] != mul[b][a]) return false;
    return true;
}

FinMonoid make_monoid(std::string name, int id_elem, std::vector<std::vector<int>> mul,
                      std::vector<std::string> labels) {
    FinMonoid m;
    m.name = std::move(name);
    m.size = static_cast<int>(mul.size());
    m.id_elem = id_elem;
    m.mul = std::move(mul);
    m.labels = std::move(labels);
    for (int a = 0; a < m.size; ++a) {
        if (m.times(m.id_elem, a) != a || m.times(a, m.id_elem) != a)
            throw error("monoid " + m.name + ": identity law fails at " + m.labels[a]);
        for (int b = 0; b < m.size; ++b)
            for (int c = 0; c < m.size; ++c)
                if (m.times(m.times(a, b), c) != m.times(a, m.times(b, c)))
                    throw error("monoid " + m.name + ": associativity fails");
    }
    return m;
}

FinMonoid monoid_trivial() {
    return make_monoid("trivial", 0, {{0}}, {"e"});
}

FinMonoid monoid_truncated_free(int letters, int maxlen) {
    // Elements are words of length <= maxlen over the letters, plus a sink
    // element absorbing every overflowing product.
    std::vector<std::string> words = {""};
    for (int len = 1; len <= maxlen; ++len) {
        std::vector<std::string> next;
        for (const auto& w : words)
            if (static_cast<int>(w.size()) == len - 1)
                for (int l = 0; l < letters; ++l)
                    next.push_back(w + static_cast<char>('a' + l));
        words.insert(words.end(), next.begin(), next.end());
    }
    int sink = static_cast<int>(words.size());
    std::map<std::string, int> index;
    for (size_t i = 0; i < words.size(); ++i) index[words[i]] = static_cast<int>(i);
    int n = sink + 1;
    std::vector<std::vector<int>> mul(n, std::vector<int>(n, sink));
    for (int a = 0; a < sink; ++a)
        for (int b = 0; b < sink; ++b) {
            std::string w = words[a] + words[b];
            mul[a][b] = static_cast<int>(w.size()) <= maxlen ? index[w] : sink;
        }
    std::vector<std::string> labels;
    for (const auto& w : words) labels.push_back(w.empty() ? "ε" : w);
    labels.push_back("⊤");
    return make_monoid("trunc" + std::to_string(letters) + "x" + std::to_string(maxlen), 0,
                       std::move(mul), std::move(labels));
}

FinMonoid monoid_trunc2() {
    FinMonoid m = monoid_truncated_free(2, 2);
    m.name = "trunc2";
    return m;
}

FinMonoid monoid_idem() {
    return make_monoid("idem", 0, {{0, 1}, {1, 1}}, {"ε", "e"});
}

SpacePtr space_terminal() {
    return make_space("1", 0, {{0}}, {"*"});
}

SpacePtr space_cap(const std::vector<std::string>& caps) {
    Mask u = (Mask{1} << caps.size()) - 1;
    std::vector<std::vector<Mask>> w;
    for (size_t i = 0; i < caps.size(); ++i) w.push_back({Mask{1} << i});
    return make_space("Cap", u, std::move(w), caps);
}

SpacePtr space_product(const SpacePtr& a, const SpacePtr& b) {
    Mask u = a->universe | b->universe;
    std::vector<std::vector<Mask>> w;
    std::vector<std::string> labels;
    w.reserve(static_cast<size_t>(a->size()) * b->size());
    for (int ia = 0; ia < a->size(); ++ia)
        for (int ib = 0; ib < b->size(); ++ib) {
            std::vector<Mask> fam;
            for (Mask ca : a->weights[ia])
                for (Mask cb : b->weights[ib]) fam.push_back(ca | cb);
            w.push_back(std::move(fam));
            labels.push_back("(" + a->labels[ia] + "," + b->labels[ib] + ")");
        }
    return make_space("(" + a->name + "*" + b->name + ")", u, std::move(w), std::move(labels));
}

SpacePtr space_tensor(const SpacePtr& a, const SpacePtr& b) {
    Mask u = a->universe | b->universe;
    std::vector<std::vector<Mask>> w;
    std::vector<std::string> labels;
    for (int ia = 0; ia < a->size(); ++ia)
        for (int ib = 0; ib < b->size(); ++ib) {
            std::vector<Mask> fam;
            for (Mask ca : a->weights[ia])
                for (Mask cb : b->weights[ib])
                    if ((ca & cb) == 0) fam.push_back(ca | cb);
            w.push_back(std::move(fam));
            labels.push_back("(" + a->labels[ia] + "," + b->labels[ib] + ")");
        }
    return make_space("(" + a->name + "(x)" + b->name + ")", u, std::move(w), std::move(labels));
}

int exp_apply(long long fid, int arg, int bsize) {
    long long p = 1;
    for (int i = 0; i < arg; ++i) p *= bsize;
    return static_cast<int>((fid / p) % bsize);
}

long long exp_encode(const std::vector<int>& table, int bsize) {
    long long id = 0;
    long long p = 1;
    for (int v : table) {
        id += v * p;
        p *= bsize;
    }
    return id;
}

namespace {

SpacePtr space_function_like(const SpacePtr& a, const SpacePtr& b, bool linear,
                             const std::string& opname) {
    Mask u = a->universe | b->universe;
    long long carrier = ipow_checked(b->size(), a->size(), kSpaceBound);
    if (carrier < 0)
        throw error("size bound exceeded building " + a->name + " " + opname + " " + b->name);
    auto masks = submasks(u);
    std::vector<std::vector<Mask>> w;
    std::vector<std::string> labels;
    w.reserve(carrier);
    for (long long fid = 0; fid < carrier; ++fid) {
        std::vector<Mask> fam;
        for (Mask cf : masks) {
            bool ok = true;
            for (int ia = 0; ia < a->size() && ok; ++ia) {
                int ib = exp_apply(fid, ia, b->size());
                for (Mask ca : a->weights[ia]) {
                    if (linear && (ca & cf) != 0) continue;
                    bool found = false;
                    for (Mask cb : b->weights[ib])
                        if ((cb & ~(cf | ca)) == 0) {
                            found = true;
                            break;
                        }
                    if (!found) {
                        ok = false;
                        break;
                    }
                }
            }
            if (ok) fam.push_back(cf);
        }
        w.push_back(std::move(fam));
        if (carrier <= 256) {
            std::string l = "[";
            for (int ia = 0; ia < a->size(); ++ia) {
                if (ia) l += " ";
                l += b->labels[exp_apply(fid, ia, b->size())];
            }
            labels.push_back(l + "]");
        } else {
            labels.push_back("f" + std::to_string(fid));
        }
    }
    return make_space("(" + a->name + opname + b->name + ")", u, std::move(w), std::move(labels));
}

} // namespace

SpacePtr space_exponential(const SpacePtr& a, const SpacePtr& b) {
    return space_function_like(a, b, false, "->");
}

SpacePtr space_linexp(const SpacePtr& a, const SpacePtr& b) {
    return space_function_like(a, b, true, "-o");
}

BoxSpace functor_box(const SpacePtr& a) {
    BoxSpace out;
    std::vector<std::vector<Mask>> w;
    std::vector<std::string> labels;
    for (int i = 0; i < a->size(); ++i) {
        bool safe = true;
        for (Mask c : a->weights[i])
            if (c != 0) safe = false;
        if (!safe) continue;
        out.embed.push_back(i);
        w.push_back({0});
        labels.push_back(a->labels[i]);
    }
    out.space = make_space("[]" + a->name, a->universe, std::move(w), std::move(labels));
    return out;
}

int TSpace::elem(int a, const std::vector<int>& out) const {
    long long id = 0;
    long long p = 1;
    for (size_t i = 0; i < channels.size(); ++i) {
        id += out[i] * p;
        p *= monoid.size;
    }
    return static_cast<int>(static_cast<long long>(a) * p + id);
}

int TSpace::value_of(int t) const {
    long long p = 1;
    for (size_t i = 0; i < channels.size(); ++i) p *= monoid.size;
    return static_cast<int>(t / p);
}

std::vector<int> TSpace::out_of(int t) const {
    std::vector<int> out(channels.size());
    long long rest = t;
    for (size_t i = 0; i < channels.size(); ++i) {
        out[i] = static_cast<int>(rest % monoid.size);
        rest /= monoid.size;
    }
    return out;
}

TSpace functor_T(const SpacePtr& a, const FinMonoid& m) {
    TSpace t;
    t.base = a;
    t.monoid = m;
    for (int bit = 0; bit < 32; ++bit)
        if (a->universe & (Mask{1} << bit)) t.channels.push_back(bit);
    long long outs = ipow_checked(m.size, static_cast<int>(t.channels.size()), kSpaceBound);
    long long carrier = outs < 0 ? -1 : outs * a->size();
    if (outs < 0 || carrier > kSpaceBound)
        throw error("size bound exceeded building T(" + a->name + ")");
    std::vector<std::vector<Mask>> w;
    std::vector<std::string> labels;
    w.reserve(carrier);
    bool small = carrier <= 4096;
    for (long long id = 0; id < carrier; ++id) {
        int val = static_cast<int>(id / outs);
        long long rest = id % outs;
        Mask supp = 0;
        std::string olabel;
        for (size_t i = 0; i < t.channels.size(); ++i) {
            int digit = static_cast<int>(rest % m.size);
            rest /= m.size;
            if (digit != m.id_elem) supp |= Mask{1} << t.channels[i];
            if (small) {
                if (i) olabel += " ";
                olabel += m.labels[digit];
            }
        }
        std::vector<Mask> fam;
        for (Mask ca : a->weights[val]) fam.push_back(ca | supp);
        w.push_back(std::move(fam));
        labels.push_back(small ? "(" + a->labels[val] + "; " + olabel + ")"
                               : "t" + std::to_string(id));
    }
    t.space = make_space("T(" + a->name + ")", a->universe, std::move(w), std::move(labels));
    return t;
}

namespace {
constexpr Mask kFailBit = Mask{1} << 8;
}

// Nested applications share one fail capability: mu must send every layer's
// fail to fail without manufacturing weight, so the bit is reused, not fresh.
ExcSpace functor_exception(const SpacePtr& a) {
    ExcSpace e;
    e.base = a;
    e.fail_bit = kFailBit;
    std::vector<std::vector<Mask>> w = a->weights;
    std::vector<std::string> labels = a->labels;
    w.push_back({kFailBit});
    labels.push_back("fail");
    e.space = make_space("E(" + a->name + ")", a->universe | kFailBit, std::move(w),
                         std::move(labels));
    return e;
}

int StateSpace::elem(const std::vector<std::pair<int, int>>& table) const {
    long long id = 0;
    long long p = 1;
    long long ah = static_cast<long long>(base->size()) * heaps;
    for (const auto& [a, h] : table) {
        id += (static_cast<long long>(a) * heaps + h) * p;
        p *= ah;
    }
    return static_cast<int>(id);
}

std::pair<int, int> StateSpace::apply(long long fid, int h) const {
    long long ah = static_cast<long long>(base->size()) * heaps;
    long long p = 1;
    for (int i = 0; i < h; ++i) p *= ah;
    long long code = (fid / p) % ah;
    return {static_cast<int>(code / heaps), static_cast<int>(code % heaps)};
}

namespace {

int heap_loc(int h, int loc, int vals) {
    int p = 1;
    for (int i = 0; i < loc; ++i) p *= vals;
    return (h / p) % vals;
}

bool heaps_agree_on(int h1, int h2, Mask c, int locs, int vals) {
    for (int l = 0; l < locs; ++l)
        if ((c & (Mask{1} << l)) && heap_loc(h1, l, vals) != heap_loc(h2, l, vals)) return false;
    return true;
}

} // namespace

StateSpace functor_state(const SpacePtr& a, int locs, int vals) {
    StateSpace s;
    s.base = a;
    s.locs = locs;
    s.vals = vals;
    long long heaps = ipow_checked(vals, locs, kSpaceBound);
    if (heaps < 0) throw error("size bound exceeded: heap count");
    s.heaps = static_cast<int>(heaps);
    Mask u = (Mask{1} << locs) - 1;
    if (a->universe & ~u) throw error("state base universe must be location bits");
    long long ah = static_cast<long long>(a->size()) * s.heaps;
    long long carrier = ipow_checked(ah, s.heaps, kSpaceBound);
    if (carrier < 0) throw error("size bound exceeded building state monad over " + a->name);
    auto masks = submasks(u);
    std::vector<std::vector<Mask>> w;
    std::vector<std::string> labels;
    w.reserve(carrier);
    for (long long fid = 0; fid < carrier; ++fid) {
        std::vector<Mask> admissible;
        for (Mask c : masks) {
            bool ok = true;
            for (int h = 0; h < s.heaps && ok; ++h) {
                auto [av, h2] = s.apply(fid, h);
                bool found = false;
                for (Mask ca : a->weights[av])
                    if ((ca & ~c) == 0) {
                        found = true;
                        break;
                    }
                if (!found) ok = false;
                for (int l = 0; l < locs && ok; ++l)
                    if (!(c & (Mask{1} << l)) && heap_loc(h2, l, vals) != heap_loc(h, l, vals))
                        ok = false;
            }
            for (int h1 = 0; h1 < s.heaps && ok; ++h1)
                for (int h2 = 0; h2 < s.heaps && ok; ++h2)
                    if (heaps_agree_on(h1, h2, c, locs, vals) &&
                        s.apply(fid, h1).first != s.apply(fid, h2).first)
                        ok = false;
            if (ok) admissible.push_back(c);
        }
        // Keep the minimal footprints: the weight is exactly what the
        // computation reads and writes, not every superset of it.
        std::vector<Mask> minimal;
        for (Mask c : admissible) {
            bool is_min = true;
            for (Mask d : admissible)
                if (d != c && (d & ~c) == 0) {
                    is_min = false;
                    break;
                }
            if (is_min) minimal.push_back(c);
        }
        w.push_back(std::move(minimal));
        labels.push_back("f" + std::to_string(fid));
    }
    s.space = make_space("St(" + a->name + ")", u, std::move(w), std::move(labels));
    return s;
}

// ---------------------------------------------------------------------------
// Law checks
// ---------------------------------------------------------------------------

namespace {

bool line_map(std::vector<SuiteLine>& lines, const std::string& name, const SpacePtr& dom,
              const SpacePtr& cod, const std::vector<int>& table) {
    auto v = hom_violation(dom, cod, table);
    lines.push_back({name, !v, v.value_or("")});
    return !v;
}

bool line_check(std::vector<SuiteLine>& lines, const std::string& name, bool pass,
                const std::string& note) {
    lines.push_back({name, pass, pass ? "" : note});
    return pass;
}

std::vector<int> compose_tables(const std::vector<int>& f, const std::vector<int>& g) {
    std::vector<int> t(f.size());
    for (size_t i = 0; i < f.size(); ++i) t[i] = g[f[i]];
    return t;
}

std::vector<int> identity_table(int n) {
    std::vector<int> t(n);
    for (int i = 0; i < n; ++i) t[i] = i;
    return t;
}

// T on morphisms: apply f to the value, keep the output.
std::vector<int> t_table(const TSpace& dom, const TSpace& cod, const std::vector<int>& f) {
    std::vector<int> t(dom.space->size());
    for (int id = 0; id < dom.space->size(); ++id)
        t[id] = cod.elem(f[dom.value_of(id)], dom.out_of(id));
    return t;
}

std::vector<int> eta_table(const TSpace& ta) {
    std::vector<int> idout(ta.channels.size(), ta.monoid.id_elem);
    std::vector<int> t(ta.base->size());
    for (int a = 0; a < ta.base->size(); ++a) t[a] = ta.elem(a, idout);
    return t;
}

std::vector<int> mu_table(const TSpace& ta, const TSpace& tta) {
    std::vector<int> t(tta.space->size());
    for (int tt = 0; tt < tta.space->size(); ++tt) {
        int inner = tta.value_of(tt);
        auto o2 = tta.out_of(tt);
        auto o1 = ta.out_of(inner);
        std::vector<int> o(o1.size());
        for (size_t i = 0; i < o.size(); ++i) o[i] = ta.monoid.times(o2[i], o1[i]);
        t[tt] = ta.elem(ta.value_of(inner), o);
    }
    return t;
}

// tau: A x TB -> T(A x B) over the given product space of A and TB.space.
std::vector<int> tau_table(const SpacePtr& a, const TSpace& tb, const TSpace& tab, int bsize) {
    std::vector<int> t(static_cast<size_t>(a->size()) * tb.space->size());
    for (int ia = 0; ia < a->size(); ++ia)
        for (int itb = 0; itb < tb.space->size(); ++itb)
            t[pair_id(ia, itb, tb.space->size())] =
                tab.elem(pair_id(ia, tb.value_of(itb), bsize), tb.out_of(itb));
    return t;
}

std::vector<int> sigma_table(const TSpace& ta, const SpacePtr& b, const TSpace& tab, int bsize) {
    std::vector<int> t(static_cast<size_t>(ta.space->size()) * b->size());
    for (int ita = 0; ita < ta.space->size(); ++ita)
        for (int ib = 0; ib < b->size(); ++ib)
            t[pair_id(ita, ib, b->size())] =
                tab.elem(pair_id(ta.value_of(ita), ib, bsize), ta.out_of(ita));
    return t;
}

std::string describe_at(const SpacePtr& sp, int id) {
    return sp->labels[id] + " in " + sp->name;
}

bool tables_equal_line(std::vector<SuiteLine>& lines, const std::string& name,
                       const std::vector<int>& lhs, const std::vector<int>& rhs,
                       const SpacePtr& dom) {
    for (size_t i = 0; i < lhs.size(); ++i)
        if (lhs[i] != rhs[i])
            return line_check(lines, name, false,
                              "sides disagree at " + describe_at(dom, static_cast<int>(i)));
    return line_check(lines, name, true, "");
}

} // namespace

std::vector<SuiteLine> check_ccc(const SpacePtr& a, const SpacePtr& b, const SpacePtr& c,
                                 const std::vector<std::string>& caps, const std::string& tag) {
    (void)caps;
    std::vector<SuiteLine> lines;
    SpacePtr p = space_product(a, b);

    std::vector<int> pi1(p->size()), pi2(p->size());
    for (int ia = 0; ia < a->size(); ++ia)
        for (int ib = 0; ib < b->size(); ++ib) {
            pi1[pair_id(ia, ib, b->size())] = ia;
            pi2[pair_id(ia, ib, b->size())] = ib;
        }
    line_map(lines, tag + "/proj1-hom", p, a, pi1);
    line_map(lines, tag + "/proj2-hom", p, b, pi2);

    auto homs_ca = enumerate_homs(c, a);
    auto homs_cb = enumerate_homs(c, b);
    auto homs_cp = enumerate_homs(c, p);
    bool pair_ok = true;
    std::string pair_note;
    size_t paired = 0;
    for (const auto& f : homs_ca)
        for (const auto& g : homs_cb) {
            std::vector<int> h(c->size());
            for (int x = 0; x < c->size(); ++x) h[x] = pair_id(f[x], g[x], b->size());
            if (auto v = hom_violation(c, p, h)) {
                pair_ok = false;
                pair_note = "pairing broke weight preservation: " + *v;
            } else {
                ++paired;
            }
            if (compose_tables(h, pi1) != f || compose_tables(h, pi2) != g) {
                pair_ok = false;
                pair_note = "projections do not recover the paired maps";
            }
        }
    line_check(lines, tag + "/pairing-hom", pair_ok, pair_note);
    line_check(lines, tag + "/product-bijection",
               paired == homs_cp.size() && paired == homs_ca.size() * homs_cb.size(),
               "hom counts " + std::to_string(homs_cp.size()) + " vs " +
                   std::to_string(homs_ca.size()) + "*" + std::to_string(homs_cb.size()));

    SpacePtr e = space_exponential(a, b);
    SpacePtr ea = space_product(e, a);
    std::vector<int> ev(ea->size());
    for (int f = 0; f < e->size(); ++f)
        for (int ia = 0; ia < a->size(); ++ia)
            ev[pair_id(f, ia, a->size())] = exp_apply(f, ia, b->size());
    line_map(lines, tag + "/eval-hom", ea, b, ev);

    SpacePtr ca = space_product(c, a);
    auto homs_cab = enumerate_homs(ca, b);
    auto homs_ce = enumerate_homs(c, e);
    bool curry_ok = true;
    std::string curry_note;
    size_t curried = 0;
    for (const auto& f : homs_cab) {
        std::vector<int> cur(c->size());
        for (int x = 0; x < c->size(); ++x) {
            std::vector<int> slice(a->size());
            for (int ia = 0; ia < a->size(); ++ia) slice[ia] = f[pair_id(x, ia, a->size())];
            cur[x] = static_cast<int>(exp_encode(slice, b->size()));
        }
        if (auto v = hom_violation(c, e, cur)) {
            curry_ok = false;
            curry_note = "curried map broke weight preservation: " + *v;
            continue;
        }
        ++curried;
        std::vector<int> back(ca->size());
        for (int x = 0; x < c->size(); ++x)
            for (int ia = 0; ia < a->size(); ++ia)
                back[pair_id(x, ia, a->size())] = exp_apply(cur[x], ia, b->size());
        if (back != f) {
            curry_ok = false;
            curry_note = "uncurry(curry(f)) differs from f";
        }
    }
    for (const auto& g : homs_ce) {
        std::vector<int> unc(ca->size());
        for (int x = 0; x < c->size(); ++x)
            for (int ia = 0; ia < a->size(); ++ia)
                unc[pair_id(x, ia, a->size())] = exp_apply(g[x], ia, b->size());
        if (auto v = hom_violation(ca, b, unc)) {
            curry_ok = false;
            curry_note = "uncurried map broke weight preservation: " + *v;
        }
    }
    line_check(lines, tag + "/curry-roundtrip", curry_ok, curry_note);
    line_check(lines, tag + "/curry-bijection",
               curried == homs_cab.size() && homs_cab.size() == homs_ce.size(),
               "hom counts " + std::to_string(homs_cab.size()) + " vs " +
                   std::to_string(homs_ce.size()));
    return lines;
}

std::vector<SuiteLine> check_tensor_hom(const SpacePtr& a, const SpacePtr& b, const SpacePtr& c,
                                        const std::vector<std::string>& caps,
                                        const std::string& tag) {
    (void)caps;
    std::vector<SuiteLine> lines;
    SpacePtr ten = space_tensor(c, a);
    SpacePtr lin = space_linexp(a, b);

    SpacePtr la = space_tensor(lin, a);
    std::vector<int> ev(la->size());
    for (int f = 0; f < lin->size(); ++f)
        for (int ia = 0; ia < a->size(); ++ia)
            ev[pair_id(f, ia, a->size())] = exp_apply(f, ia, b->size());
    line_map(lines, tag + "/lin-eval-hom", la, b, ev);

    auto homs_ten = enumerate_homs(ten, b);
    auto homs_lin = enumerate_homs(c, lin);
    bool ok = true;
    std::string note;
    size_t curried = 0;
    for (const auto& f : homs_ten) {
        std::vector<int> cur(c->size());
        for (int x = 0; x < c->size(); ++x) {
            std::vector<int> slice(a->size());
            for (int ia = 0; ia < a->size(); ++ia) slice[ia] = f[pair_id(x, ia, a->size())];
            cur[x] = static_cast<int>(exp_encode(slice, b->size()));
        }
        if (auto v = hom_violation(c, lin, cur)) {
            ok = false;
            note = "curried map broke weight preservation: " + *v;
            continue;
        }
        ++curried;
        std::vector<int> back(ten->size());
        for (int x = 0; x < c->size(); ++x)
            for (int ia = 0; ia < a->size(); ++ia)
                back[pair_id(x, ia, a->size())] = exp_apply(cur[x], ia, b->size());
        if (back != f) {
            ok = false;
            note = "uncurry(curry(f)) differs from f";
        }
    }
    for (const auto& g : homs_lin) {
        std::vector<int> unc(ten->size());
        for (int x = 0; x < c->size(); ++x)
            for (int ia = 0; ia < a->size(); ++ia)
                unc[pair_id(x, ia, a->size())] = exp_apply(g[x], ia, b->size());
        if (auto v = hom_violation(ten, b, unc)) {
            ok = false;
            note = "uncurried map broke weight preservation: " + *v;
        }
    }
    line_check(lines, tag + "/adjunction-roundtrip", ok, note);
    line_check(lines, tag + "/adjunction-bijection",
               curried == homs_ten.size() && homs_ten.size() == homs_lin.size(),
               "hom counts " + std::to_string(homs_ten.size()) + " vs " +
                   std::to_string(homs_lin.size()));
    return lines;
}

std::vector<SuiteLine> check_monad(const SpacePtr& a, const SpacePtr& b, const FinMonoid& m,
                                   const std::vector<std::string>& caps, const std::string& tag) {
    (void)caps;
    std::vector<SuiteLine> lines;
    TSpace ta = functor_T(a, m);
    TSpace tb = functor_T(b, m);
    TSpace tta = functor_T(ta.space, m);
    int k = static_cast<int>(ta.channels.size());
    std::vector<int> idout(k, m.id_elem);

    auto eta_a = eta_table(ta);
    line_map(lines, tag + "/eta-hom", a, ta.space, eta_a);
    auto mu_a = mu_table(ta, tta);
    line_map(lines, tag + "/mu-hom", tta.space, ta.space, mu_a);

    bool unit_ok = true;
    std::string unit_note;
    for (int t = 0; t < ta.space->size() && unit_ok; ++t) {
        int left = mu_a[tta.elem(t, idout)];
        int right = mu_a[tta.elem(eta_a[ta.value_of(t)], ta.out_of(t))];
        if (left != t || right != t) {
            unit_ok = false;
            unit_note = "unit law fails at " + describe_at(ta.space, t);
        }
    }
    line_check(lines, tag + "/unit-laws", unit_ok, unit_note);

    long long mk = 1;
    for (int i = 0; i < k; ++i) mk *= m.size;
    bool assoc_ok = true;
    std::string assoc_note;
    long long total = static_cast<long long>(tta.space->size()) * mk;
    for (long long ttt = 0; ttt < total && assoc_ok; ++ttt) {
        int tt = static_cast<int>(ttt / mk);
        long long rest = ttt % mk;
        std::vector<int> o3(k);
        for (int i = 0; i < k; ++i) {
            o3[i] = static_cast<int>(rest % m.size);
            rest /= m.size;
        }
        int t = tta.value_of(tt);
        auto o2 = tta.out_of(tt);
        int val = ta.value_of(t);
        auto o1 = ta.out_of(t);
        std::vector<int> l(k), r(k);
        for (int i = 0; i < k; ++i) {
            l[i] = m.times(m.times(o3[i], o2[i]), o1[i]);
            r[i] = m.times(o3[i], m.times(o2[i], o1[i]));
        }
        if (ta.elem(val, l) != ta.elem(val, r)) {
            assoc_ok = false;
            assoc_note = "associativity fails above " + describe_at(tta.space, tt);
        }
    }
    line_check(lines, tag + "/assoc-law", assoc_ok, assoc_note);

    SpacePtr ab = space_product(a, b);
    TSpace tab = functor_T(ab, m);
    SpacePtr a_tb = space_product(a, tb.space);
    auto tau = tau_table(a, tb, tab, b->size());
    line_map(lines, tag + "/tau-hom", a_tb, tab.space, tau);
    SpacePtr ta_b = space_product(ta.space, b);
    auto sigma = sigma_table(ta, b, tab, b->size());
    line_map(lines, tag + "/sigma-hom", ta_b, tab.space, sigma);

    {
        // Strengthening with the terminal object is the projection.
        SpacePtr one = space_terminal();
        SpacePtr onea = space_product(one, a);
        TSpace tonea = functor_T(onea, m);
        auto tau1 = tau_table(one, ta, tonea, a->size());
        std::vector<int> proj(onea->size());
        for (int ia = 0; ia < a->size(); ++ia) proj[ia] = ia;
        auto tproj = t_table(tonea, ta, proj);
        tables_equal_line(lines, tag + "/strength-unit", compose_tables(tau1, tproj),
                          identity_table(ta.space->size()), ta.space);
    }
    {
        // Consecutive strengths agree with reassociation; the third space is a.
        SpacePtr bc = space_product(b, a);
        TSpace tbc = functor_T(bc, m);
        SpacePtr ab_ = space_product(a, b);
        SpacePtr lhs_dom = space_product(ab_, ta.space);
        TSpace t_ab_a = functor_T(space_product(ab_, a), m);
        auto tau_ab = tau_table(ab_, ta, t_ab_a, a->size());
        std::vector<int> assoc(space_product(ab_, a)->size());
        for (int ia = 0; ia < a->size(); ++ia)
            for (int ib = 0; ib < b->size(); ++ib)
                for (int ic = 0; ic < a->size(); ++ic)
                    assoc[pair_id(pair_id(ia, ib, b->size()), ic, a->size())] =
                        pair_id(ia, pair_id(ib, ic, a->size()), bc->size());
        TSpace t_a_bc = functor_T(space_product(a, bc), m);
        auto lhs = compose_tables(tau_ab, t_table(t_ab_a, t_a_bc, assoc));

        auto tau_bc = tau_table(b, ta, tbc, a->size());
        auto tau_a_bc = tau_table(a, tbc, t_a_bc, bc->size());
        std::vector<int> rhs(lhs_dom->size());
        for (int ia = 0; ia < a->size(); ++ia)
            for (int ib = 0; ib < b->size(); ++ib)
                for (int itc = 0; itc < ta.space->size(); ++itc) {
                    int inner = tau_bc[pair_id(ib, itc, ta.space->size())];
                    rhs[pair_id(pair_id(ia, ib, b->size()), itc, ta.space->size())] =
                        tau_a_bc[pair_id(ia, inner, tbc.space->size())];
                }
        tables_equal_line(lines, tag + "/strength-assoc", lhs, rhs, lhs_dom);
    }
    {
        // Strength respects the unit and the multiplication.
        SpacePtr abp = space_product(a, b);
        bool ok = true;
        std::string note;
        for (int ia = 0; ia < a->size() && ok; ++ia)
            for (int ib = 0; ib < b->size(); ++ib) {
                int viaeta = tau[pair_id(ia, eta_table(tb)[ib], tb.space->size())];
                int direct = tab.elem(pair_id(ia, ib, b->size()), idout);
                if (viaeta != direct) {
                    ok = false;
                    note = "unit square fails at " + describe_at(abp, pair_id(ia, ib, b->size()));
                    break;
                }
            }
        TSpace ttb = functor_T(tb.space, m);
        auto mu_b = mu_table(tb, ttb);
        TSpace t_a_tb = functor_T(a_tb, m);
        TSpace ttab = functor_T(tab.space, m);
        auto tau_attb = tau_table(a, ttb, t_a_tb, tb.space->size());
        auto ttau = t_table(t_a_tb, ttab, tau);
        auto mu_ab = mu_table(tab, ttab);
        auto via_t = compose_tables(tau_attb, ttau);
        for (int ia = 0; ia < a->size() && ok; ++ia)
            for (int itt = 0; itt < ttb.space->size(); ++itt) {
                int lhs = tau[pair_id(ia, mu_b[itt], tb.space->size())];
                int rhs = mu_ab[via_t[pair_id(ia, itt, ttb.space->size())]];
                if (lhs != rhs) {
                    ok = false;
                    note = "multiplication square fails at (" + a->labels[ia] + ", " +
                           describe_at(ttb.space, itt) + ")";
                    break;
                }
            }
        line_check(lines, tag + "/strength-monad", ok, note);
    }
    {
        // Left and right strengths agree across the symmetry.
        SpacePtr ba = space_product(b, a);
        TSpace tba = functor_T(ba, m);
        std::vector<int> swap_ab(space_product(a, b)->size());
        for (int ia = 0; ia < a->size(); ++ia)
            for (int ib = 0; ib < b->size(); ++ib)
                swap_ab[pair_id(ia, ib, b->size())] = pair_id(ib, ia, a->size());
        auto tswap = t_table(tab, tba, swap_ab);
        auto lhs = compose_tables(tau, tswap);
        auto sigma_ba = sigma_table(tb, a, tba, a->size());
        std::vector<int> rhs(a_tb->size());
        for (int ia = 0; ia < a->size(); ++ia)
            for (int itb = 0; itb < tb.space->size(); ++itb)
                rhs[pair_id(ia, itb, tb.space->size())] =
                    sigma_ba[pair_id(itb, ia, a->size())];
        tables_equal_line(lines, tag + "/strength-swap", lhs, rhs, a_tb);
    }
    {
        // The two effect-sequencing composites differ exactly when the
        // monoid is noncommutative (and there is a channel to write on).
        bool witness = false;
        std::string wnote = "alpha = beta everywhere";
        for (int ita = 0; ita < ta.space->size() && !witness; ++ita)
            for (int itb = 0; itb < tb.space->size(); ++itb) {
                auto o1 = ta.out_of(ita);
                auto o2 = tb.out_of(itb);
                std::vector<int> alpha(k), beta(k);
                for (int i = 0; i < k; ++i) {
                    alpha[i] = m.times(o1[i], o2[i]);
                    beta[i] = m.times(o2[i], o1[i]);
                }
                int pv = pair_id(ta.value_of(ita), tb.value_of(itb), b->size());
                if (tab.elem(pv, alpha) != tab.elem(pv, beta)) {
                    witness = true;
                    wnote = "alpha/beta differ at (" + describe_at(ta.space, ita) + ", " +
                            describe_at(tb.space, itb) + ")";
                    break;
                }
            }
        bool expect_witness = !m.commutative() && k > 0 && ta.space->size() > 0;
        line_check(lines, tag + "/alpha-beta", witness == expect_witness,
                   "expected " + std::string(expect_witness ? "a" : "no") +
                       " non-commutativity witness; " + wnote);
        if (witness == expect_witness) lines.back().note = wnote;
    }
    return lines;
}

std::vector<SuiteLine> check_comonad(const SpacePtr& a, const SpacePtr& b,
                                     const std::vector<std::string>& caps, const std::string& tag) {
    (void)caps;
    std::vector<SuiteLine> lines;
    BoxSpace ba = functor_box(a);
    BoxSpace bb = functor_box(b);
    BoxSpace bba = functor_box(ba.space);

    line_map(lines, tag + "/counit-hom", ba.space, a, ba.embed);
    line_check(lines, tag + "/delta-iso",
               bba.space->size() == ba.space->size() &&
                   bba.embed == identity_table(ba.space->size()),
               "comultiplication is not an isomorphism on the carrier");

    std::vector<int> delta = identity_table(ba.space->size());
    line_map(lines, tag + "/delta-hom", ba.space, bba.space, delta);

    // delta ; counit = id, both for the outer and the boxed counit.
    tables_equal_line(lines, tag + "/counit-laws", compose_tables(delta, bba.embed),
                      identity_table(ba.space->size()), ba.space);

    // Box is monoidal: pairing restricts to a bijection with the box of the product.
    SpacePtr prod = space_product(a, b);
    BoxSpace bprod = functor_box(prod);
    SpacePtr bpair = space_product(ba.space, bb.space);
    std::vector<int> into(bpair->size(), -1);
    std::vector<int> seen(bprod.space->size(), 0);
    bool ok = bpair->size() == bprod.space->size();
    std::string note = ok ? "" : "carrier sizes differ";
    std::map<int, int> index;
    for (int i = 0; i < bprod.space->size(); ++i) index[bprod.embed[i]] = i;
    for (int i = 0; i < ba.space->size() && ok; ++i)
        for (int j = 0; j < bb.space->size(); ++j) {
            int base = pair_id(ba.embed[i], bb.embed[j], b->size());
            auto it = index.find(base);
            if (it == index.end()) {
                ok = false;
                note = "paired safe elements are not safe in the product";
                break;
            }
            into[pair_id(i, j, bb.space->size())] = it->second;
            seen[it->second] += 1;
        }
    for (int i = 0; i < bprod.space->size() && ok; ++i)
        if (seen[i] != 1) {
            ok = false;
            note = "pairing is not a bijection onto the boxed product";
        }
    if (ok && bpair->size() > 0) ok = !hom_violation(bpair, bprod.space, into);
    line_check(lines, tag + "/monoidal-pairing", ok, note);

    BoxSpace bone = functor_box(space_terminal());
    line_check(lines, tag + "/monoidal-unit", bone.space->size() == 1,
               "box of the terminal space is not a point");
    return lines;
}

std::vector<SuiteLine> check_cancellation(const SpacePtr& a, const FinMonoid& m,
                                          const std::vector<std::string>& caps,
                                          const std::string& tag) {
    (void)caps;
    std::vector<SuiteLine> lines;
    TSpace ta = functor_T(a, m);
    BoxSpace bta = functor_box(ta.space);
    BoxSpace ba = functor_box(a);
    std::vector<int> idout(ta.channels.size(), m.id_elem);

    line_check(lines, tag + "/carrier-count", bta.space->size() == ba.space->size(),
               "box of the computation space has " + std::to_string(bta.space->size()) +
                   " elements, box of the base has " + std::to_string(ba.space->size()));

    std::map<int, int> ba_index;
    for (int i = 0; i < ba.space->size(); ++i) ba_index[ba.embed[i]] = i;
    std::map<int, int> bta_index;
    for (int i = 0; i < bta.space->size(); ++i) bta_index[bta.embed[i]] = i;

    bool ok = true;
    std::string note;
    std::vector<int> phi(bta.space->size());
    for (int i = 0; i < bta.space->size() && ok; ++i) {
        int t = bta.embed[i];
        auto out = ta.out_of(t);
        if (out != idout) {
            ok = false;
            note = "a safe computation carries output: " + describe_at(ta.space, t);
            break;
        }
        auto it = ba_index.find(ta.value_of(t));
        if (it == ba_index.end()) {
            ok = false;
            note = "a safe computation returns an unsafe value: " + describe_at(ta.space, t);
            break;
        }
        phi[i] = it->second;
    }
    std::vector<int> back(ba.space->size());
    for (int i = 0; i < ba.space->size() && ok; ++i) {
        auto it = bta_index.find(ta.elem(ba.embed[i], idout));
        if (it == bta_index.end()) {
            ok = false;
            note = "the unit of a safe value is not a safe computation";
            break;
        }
        back[i] = it->second;
    }
    if (ok) {
        ok = compose_tables(phi, back) == identity_table(bta.space->size()) &&
             compose_tables(back, phi) == identity_table(ba.space->size());
        if (!ok) note = "the two directions are not mutually inverse";
    }
    if (ok && bta.space->size() > 0) {
        auto v1 = hom_violation(bta.space, ba.space, phi);
        auto v2 = hom_violation(ba.space, bta.space, back);
        if (v1 || v2) {
            ok = false;
            note = v1 ? *v1 : *v2;
        }
    }
    line_check(lines, tag + "/iso", ok, note);
    return lines;
}

std::vector<SuiteLine> check_exception(const SpacePtr& a, const std::vector<std::string>& caps,
                                       const std::string& tag) {
    (void)caps;
    std::vector<SuiteLine> lines;
    ExcSpace ta = functor_exception(a);
    ExcSpace tta = functor_exception(ta.space);
    ExcSpace ttta = functor_exception(tta.space);

    line_check(lines, tag + "/carrier-count", ta.space->size() == a->size() + 1,
               "computation carrier is not one bigger than the base");

    std::vector<int> eta(a->size());
    for (int i = 0; i < a->size(); ++i) eta[i] = i;
    line_map(lines, tag + "/eta-hom", a, ta.space, eta);

    std::vector<int> mu(tta.space->size());
    for (int i = 0; i < tta.space->size(); ++i)
        mu[i] = i < ta.space->size() ? (i < a->size() ? i : ta.fail_id()) : ta.fail_id();
    line_map(lines, tag + "/mu-hom", tta.space, ta.space, mu);

    bool unit_ok = true;
    for (int t = 0; t < ta.space->size(); ++t) {
        int etaT = t; // unit of TA is the left injection, which keeps ids
        std::vector<int> teta(ta.space->size());
        for (int i = 0; i < ta.space->size(); ++i)
            teta[i] = i < a->size() ? eta[i] : tta.fail_id();
        if (mu[etaT] != t || mu[teta[t]] != t) unit_ok = false;
    }
    line_check(lines, tag + "/unit-laws", unit_ok, "unit law fails");

    std::vector<int> mu_t(ttta.space->size()); // mu at the outer two layers
    for (int i = 0; i < ttta.space->size(); ++i)
        mu_t[i] = i < tta.space->size() ? (i < ta.space->size() ? i : tta.fail_id())
                                        : tta.fail_id();
    std::vector<int> t_mu(ttta.space->size()); // mu applied under the outer layer
    for (int i = 0; i < ttta.space->size(); ++i)
        t_mu[i] = i < tta.space->size() ? mu[i] : tta.fail_id();
    bool assoc_ok = true;
    for (int i = 0; i < ttta.space->size(); ++i)
        if (mu[mu_t[i]] != mu[t_mu[i]]) assoc_ok = false;
    line_check(lines, tag + "/assoc-law", assoc_ok, "associativity fails");

    // Cancellation: the failing element carries the fail capability, so the
    // box keeps exactly the safe base values.
    BoxSpace bta = functor_box(ta.space);
    BoxSpace ba = functor_box(a);
    bool canc = bta.space->size() == ba.space->size();
    for (int i = 0; i < bta.space->size() && canc; ++i)
        if (bta.embed[i] != ba.embed[i]) canc = false;
    line_check(lines, tag + "/cancellation", canc,
               "box of the computation space differs from box of the base");
    return lines;
}

std::vector<SuiteLine> check_state(const SpacePtr& a, int locs, int vals, const std::string& tag) {
    std::vector<SuiteLine> lines;
    StateSpace ta = functor_state(a, locs, vals);
    StateSpace tta = functor_state(ta.space, locs, vals);

    long long expect = ipow_checked(static_cast<long long>(a->size()) * ta.heaps, ta.heaps,
                                    kSpaceBound);
    line_check(lines, tag + "/carrier-count", ta.space->size() == expect,
               "state carrier size mismatch");

    std::vector<int> eta(a->size());
    for (int i = 0; i < a->size(); ++i) {
        std::vector<std::pair<int, int>> table;
        for (int h = 0; h < ta.heaps; ++h) table.emplace_back(i, h);
        eta[i] = ta.elem(table);
    }
    line_map(lines, tag + "/eta-hom", a, ta.space, eta);

    std::vector<int> mu(tta.space->size());
    for (int f = 0; f < tta.space->size(); ++f) {
        std::vector<std::pair<int, int>> table;
        for (int h = 0; h < ta.heaps; ++h) {
            auto [g, h1] = tta.apply(f, h);
            table.push_back(ta.apply(g, h1));
        }
        mu[f] = ta.elem(table);
    }
    line_map(lines, tag + "/mu-hom", tta.space, ta.space, mu);

    bool unit_ok = true;
    for (int t = 0; t < ta.space->size() && unit_ok; ++t) {
        std::vector<std::pair<int, int>> etaT;
        for (int h = 0; h < ta.heaps; ++h) etaT.emplace_back(t, h);
        if (mu[tta.elem(etaT)] != t) unit_ok = false;
        std::vector<std::pair<int, int>> tEta;
        for (int h = 0; h < ta.heaps; ++h) {
            auto [av, h2] = ta.apply(t, h);
            tEta.emplace_back(eta[av], h2);
        }
        if (mu[tta.elem(tEta)] != t) unit_ok = false;
    }
    line_check(lines, tag + "/unit-laws", unit_ok, "unit law fails");

    long long ah = static_cast<long long>(tta.space->size()) * ta.heaps;
    long long total = ipow_checked(ah, ta.heaps, 8000000);
    bool assoc_ok = total >= 0;
    std::string assoc_note = assoc_ok ? "" : "size bound exceeded";
    for (long long f = 0; f < total && assoc_ok; ++f) {
        for (int h = 0; h < ta.heaps; ++h) {
            long long p = 1;
            for (int i = 0; i < h; ++i) p *= ah;
            long long code = (f / p) % ah;
            int g = static_cast<int>(code / ta.heaps);
            int h1 = static_cast<int>(code % ta.heaps);
            // side one: join the outer two layers, then the remaining two
            auto [t1, h2] = tta.apply(g, h1);
            auto left = ta.apply(t1, h2);
            // side two: join the inner two layers first via the mu table
            auto right = ta.apply(mu[g], h1);
            if (left != right) {
                assoc_ok = false;
                assoc_note = "associativity fails at triple computation " + std::to_string(f);
                break;
            }
        }
    }
    line_check(lines, tag + "/assoc-law", assoc_ok, assoc_note);

    BoxSpace bta = functor_box(ta.space);
    BoxSpace ba = functor_box(a);
    bool canc = bta.space->size() == ba.space->size();
    std::string note = canc ? "" : "pure-computation count differs from safe-value count";
    for (int i = 0; i < bta.space->size() && canc; ++i) {
        int t = bta.embed[i];
        int a0 = ta.apply(t, 0).first;
        for (int h = 0; h < ta.heaps; ++h) {
            auto [av, h2] = ta.apply(t, h);
            if (av != a0 || h2 != h) {
                canc = false;
                note = "a weight-empty computation reads or writes the heap";
            }
        }
        if (canc && eta[a0] != t) {
            canc = false;
            note = "a pure computation is not in the image of the unit";
        }
    }
    line_check(lines, tag + "/cancellation", canc, note);
    return lines;
}

std::vector<SuiteLine> check_functoriality(const SpacePtr& a, const SpacePtr& b, const SpacePtr& c,
                                           const FinMonoid& m, const std::string& tag) {
    std::vector<SuiteLine> lines;
    auto fs = enumerate_homs(a, b);
    auto gs = enumerate_homs(b, c);
    TSpace ta = functor_T(a, m);
    TSpace tb = functor_T(b, m);
    TSpace tc = functor_T(c, m);

    line_check(lines, tag + "/T-identity",
               t_table(ta, ta, identity_table(a->size())) == identity_table(ta.space->size()),
               "T does not preserve the identity");

    bool comp_ok = true;
    std::string note;
    auto sample = [](size_t n) {
        std::vector<size_t> idx;
        if (n > 0) idx.push_back(0);
        if (n > 2) idx.push_back(n / 2);
        if (n > 1) idx.push_back(n - 1);
        return idx;
    };
    for (size_t fi : sample(fs.size()))
        for (size_t gi : sample(gs.size())) {
            auto composed = compose_tables(fs[fi], gs[gi]);
            if (compose_tables(t_table(ta, tb, fs[fi]), t_table(tb, tc, gs[gi])) !=
                t_table(ta, tc, composed)) {
                comp_ok = false;
                note = "T breaks composition at hom pair (" + std::to_string(fi) + "," +
                       std::to_string(gi) + ")";
            }
        }
    line_check(lines, tag + "/T-composition", comp_ok, note);

    // Box functoriality needs unique weights so the restriction is total.
    auto unique_weights = [](const SpacePtr& s) {
        for (const auto& w : s->weights)
            if (w.size() != 1) return false;
        return true;
    };
    if (!unique_weights(a) || !unique_weights(b) || !unique_weights(c)) {
        line_check(lines, tag + "/box-functor", false,
                   "box functoriality requires unique-weight spaces");
        return lines;
    }
    BoxSpace bxa = functor_box(a);
    BoxSpace bxb = functor_box(b);
    BoxSpace bxc = functor_box(c);
    auto box_table = [](const BoxSpace& d, const BoxSpace& cod_box,
                        const std::vector<int>& f) -> std::optional<std::vector<int>> {
        std::map<int, int> index;
        for (int i = 0; i < cod_box.space->size(); ++i) index[cod_box.embed[i]] = i;
        std::vector<int> t(d.space->size());
        for (int i = 0; i < d.space->size(); ++i) {
            auto it = index.find(f[d.embed[i]]);
            if (it == index.end()) return std::nullopt;
            t[i] = it->second;
        }
        return t;
    };
    bool box_ok =
        box_table(bxa, bxa, identity_table(a->size())) == std::optional(identity_table(bxa.space->size()));
    for (size_t fi : sample(fs.size()))
        for (size_t gi : sample(gs.size())) {
            auto bf = box_table(bxa, bxb, fs[fi]);
            auto bg = box_table(bxb, bxc, gs[gi]);
            auto bfg = box_table(bxa, bxc, compose_tables(fs[fi], gs[gi]));
            if (!bf || !bg || !bfg) {
                box_ok = false;
                note = "box restriction is not total on a sampled hom";
            } else if (compose_tables(*bf, *bg) != *bfg) {
                box_ok = false;
                note = "box breaks composition";
            }
        }
    line_check(lines, tag + "/box-functor", box_ok, note);
    return lines;
}

// ---------------------------------------------------------------------------
// Interpreter coherence
// ---------------------------------------------------------------------------

namespace {

// First-order program generator: closed terms of unit/str/cap/product/box
// type whose string literals stay inside a one-letter alphabet, so outputs
// land in the truncated one-letter monoid.
struct FoGen {
    Rng& rng;
    std::vector<std::string> chans = {"c0", "c1"};
    std::vector<std::string> strs = {"", "a", "aa"};

    TypePtr gen_type(int depth, bool allow_cap) {
        size_t roll = rng.below(depth <= 0 ? 2 + (allow_cap ? 1 : 0) : 5);
        switch (roll) {
        case 0: return ty::unit();
        case 1: return ty::str();
        case 2:
            if (allow_cap) return ty::cap();
            return ty::unit();
        case 3: return ty::prod(gen_type(depth - 1, allow_cap), gen_type(depth - 1, allow_cap));
        default: return ty::boxed(gen_type(depth - 1, false));
        }
    }

    TermPtr gen_value(const TypePtr& t) {
        switch (t->kind) {
        case Type::Kind::Unit: return tm::unit();
        case Type::Kind::Str: return tm::str(strs[rng.below(strs.size())]);
        case Type::Kind::Cap: return tm::chan(chans[rng.below(chans.size())]);
        case Type::Kind::Prod: return tm::pair(gen_value(t->left), gen_value(t->right));
        case Type::Kind::Box: return tm::box(gen_value(t->left));
        case Type::Kind::Arrow: break;
        }
        throw error("first-order generator hit a function type");
    }

    TermPtr gen_effect(int size) {
        TermPtr p = tm::print(tm::chan(chans[rng.below(chans.size())]), gen_term(ty::str(), size));
        if (size > 1 && rng.chance(1, 3)) return tm::seq(p, gen_effect(size - 1));
        return p;
    }

    TermPtr gen_term(const TypePtr& want, int size) {
        if (size <= 0) return gen_value(want);
        switch (rng.below(6)) {
        case 0: return gen_value(want);
        case 1: return tm::seq(gen_effect(size / 2), gen_term(want, size / 2));
        case 2:
            return tm::fst(tm::pair(gen_term(want, size / 2), gen_term(ty::str(), size / 2)));
        case 3:
            return tm::snd(tm::pair(gen_term(ty::unit(), size / 2), gen_term(want, size / 2)));
        case 4: {
            TypePtr payload = gen_type(1, false);
            std::string x = "x";
            TermPtr body = type_equal(payload, want) && rng.chance(1, 2)
                               ? tm::var(x)
                               : gen_term(want, size / 2);
            return tm::let_box(x, tm::box(gen_value(payload)), body);
        }
        default: {
            TypePtr dom = gen_type(1, true);
            std::string x = "y";
            return tm::app(tm::lam(x, dom, gen_term(want, size / 2)), gen_term(dom, size / 2));
        }
        }
    }
};

struct TypeDenotation {
    SpacePtr space;
    TypePtr type;
    std::shared_ptr<TypeDenotation> left, right;
    std::vector<int> box_embed; // for box types
};

std::shared_ptr<TypeDenotation> denote_type(const TypePtr& t, const FinMonoid& m,
                                            const std::vector<std::string>& chans) {
    auto d = std::make_shared<TypeDenotation>();
    d->type = t;
    switch (t->kind) {
    case Type::Kind::Unit: d->space = space_terminal(); break;
    case Type::Kind::Str: {
        std::vector<std::vector<Mask>> w(m.size, {Mask{0}});
        d->space = make_space("Str", (Mask{1} << chans.size()) - 1, std::move(w), m.labels);
        break;
    }
    case Type::Kind::Cap: d->space = space_cap(chans); break;
    case Type::Kind::Prod:
        d->left = denote_type(t->left, m, chans);
        d->right = denote_type(t->right, m, chans);
        d->space = space_product(d->left->space, d->right->space);
        break;
    case Type::Kind::Box: {
        d->left = denote_type(t->left, m, chans);
        BoxSpace b = functor_box(d->left->space);
        d->space = b.space;
        d->box_embed = b.embed;
        break;
    }
    case Type::Kind::Arrow: throw error("first-order denotation hit a function type");
    }
    return d;
}

int encode_string(const std::string& s, const FinMonoid& m) {
    // Words over the single letter 'a'; the monoid labels carry the letter
    // words, with the sink absorbing everything longer.
    int letter = -1;
    for (int i = 0; i < m.size; ++i)
        if (m.labels[i] == "a") letter = i;
    if (letter < 0) throw error("monoid has no letter to encode strings with");
    int elt = m.id_elem;
    for (char ch : s) {
        if (ch != 'a') throw error("string outside the one-letter alphabet");
        elt = m.times(elt, letter);
    }
    return elt;
}

int encode_value(const Value& v, const TypeDenotation& d, const FinMonoid& m,
                 const std::vector<std::string>& chans);

int encode_value(const Value& v, const TypeDenotation& d, const FinMonoid& m,
                 const std::vector<std::string>& chans) {
    switch (d.type->kind) {
    case Type::Kind::Unit: return 0;
    case Type::Kind::Str: return encode_string(v.text, m);
    case Type::Kind::Cap:
        for (size_t i = 0; i < chans.size(); ++i)
            if (chans[i] == v.text) return static_cast<int>(i);
        throw error("channel outside the modeled universe: " + v.text);
    case Type::Kind::Prod:
        return pair_id(encode_value(*v.a, *d.left, m, chans),
                       encode_value(*v.b, *d.right, m, chans), d.right->space->size());
    case Type::Kind::Box: {
        int base = encode_value(*v.a, *d.left, m, chans);
        for (size_t i = 0; i < d.box_embed.size(); ++i)
            if (d.box_embed[i] == base) return static_cast<int>(i);
        throw error("boxed payload is not a safe element of the base space");
    }
    case Type::Kind::Arrow: break;
    }
    throw error("first-order encoding hit a function type");
}

Mask mask_of(const CapSet& caps, const std::vector<std::string>& chans) {
    Mask m = 0;
    for (const auto& c : caps) {
        bool found = false;
        for (size_t i = 0; i < chans.size(); ++i)
            if (chans[i] == c) {
                m |= Mask{1} << i;
                found = true;
            }
        if (!found) throw error("capability outside the modeled universe: " + c);
    }
    return m;
}

} // namespace

std::vector<SuiteLine> check_interp_coherence(std::uint64_t seed, int programs) {
    std::vector<SuiteLine> lines;
    Rng rng(seed);
    FoGen gen{rng};
    FinMonoid m = monoid_truncated_free(1, 2);
    int checked = 0;
    bool ok = true;
    std::string note;
    for (int i = 0; i < programs && ok; ++i) {
        TypePtr want = gen.gen_type(2, true);
        TermPtr prog = gen.gen_term(want, 4);
        TypePtr got = infer({}, prog);
        if (!type_equal(got, want)) {
            ok = false;
            note = "generator produced a term of the wrong type: " + print_term(prog);
            break;
        }
        EvalResult res = eval({}, prog, EvalOptions{});
        WeighResult wr{weight_of_value(res.value), weight_of_output(res.output)};

        auto d = denote_type(want, m, gen.chans);
        // Outputs may land on any modeled channel, whatever the value type
        // mentions, so T is taken over the full channel universe.
        Mask full = (Mask{1} << gen.chans.size()) - 1;
        SpacePtr base = make_space(d->space->name, full, d->space->weights, d->space->labels);
        TSpace t = functor_T(base, m);
        int elem = encode_value(*res.value, *d, m, gen.chans);
        std::vector<int> out(gen.chans.size(), m.id_elem);
        for (const auto& [chan, text] : res.output) {
            bool found = false;
            for (size_t c = 0; c < gen.chans.size(); ++c)
                if (gen.chans[c] == chan) {
                    out[c] = encode_string(text, m);
                    found = true;
                }
            if (!found) throw error("output channel outside the modeled universe");
        }
        int tid = t.elem(elem, out);
        Mask claimed = mask_of(cap_union(wr.value_weight, wr.effect_weight), gen.chans);
        if (!t.space->weighted(tid, claimed)) {
            ok = false;
            note = "interpreter weight " + render_cap_set(cap_union(wr.value_weight,
                                                                    wr.effect_weight)) +
                   " is not admissible for " + describe_at(t.space, tid) + " running " +
                   print_term(prog);
            break;
        }
        ++checked;
    }
    line_check(lines, "model/interp-coherence", ok, note);
    if (ok) lines.back().note = std::to_string(checked) + " programs";
    return lines;
}

// ---------------------------------------------------------------------------
// Suite
// ---------------------------------------------------------------------------

namespace {

SpacePtr gen_space(Rng& rng, const std::string& name, int max_carrier, Mask universe,
                   bool unique_weights) {
    int n = 1 + static_cast<int>(rng.below(static_cast<size_t>(max_carrier)));
    auto masks = submasks(universe);
    std::vector<std::vector<Mask>> w;
    for (int i = 0; i < n; ++i) {
        std::vector<Mask> fam;
        if (i == 0) {
            fam.push_back(0); // keep a safe element so hom-sets are inhabited
        } else {
            size_t k = unique_weights ? 1 : 1 + rng.below(2);
            for (size_t j = 0; j < k; ++j) fam.push_back(masks[rng.below(masks.size())]);
        }
        w.push_back(std::move(fam));
    }
    return make_space(name, universe, std::move(w), tiny_labels(name + ".", n));
}

} // namespace

std::vector<SuiteLine> run_model_suite(const ModelOptions& opts) {
    std::vector<SuiteLine> lines;
    if (opts.caps < 1 || opts.caps > 4) throw error("model suite supports 1 to 4 capabilities");
    if (opts.max_carrier < 1 || opts.max_carrier > 4)
        throw error("model suite supports carriers of 1 to 4 elements");
    FinMonoid monoid = opts.monoid == "trivial" ? monoid_trivial()
                       : opts.monoid == "idem"  ? monoid_idem()
                       : opts.monoid == "trunc2"
                           ? monoid_trunc2()
                           : throw error("unknown monoid: " + opts.monoid);
    std::vector<std::string> caps;
    for (int i = 0; i < opts.caps; ++i) caps.push_back("c" + std::to_string(i));
    Mask u = (Mask{1} << opts.caps) - 1;

    Rng rng(opts.seed);
    SpacePtr one = space_terminal();
    SpacePtr capsp = space_cap(caps);
    SpacePtr r1 = gen_space(rng, "R1", opts.max_carrier, u, false);
    SpacePtr r2 = gen_space(rng, "R2", opts.max_carrier, u, false);
    SpacePtr c1 = gen_space(rng, "C1", 2, u, false);
    SpacePtr c2 = gen_space(rng, "C2", 2, u, false);
    SpacePtr split = make_space("Split", u, {{0}, {1}}, {"pure", "tainted"});
    SpacePtr zero = make_space("Zero", u, {{0}, {0}}, {"z0", "z1"});

    {
        // Negative control: the unique table into the capability space is
        // rejected, so there are no global sections of Cap.
        std::vector<int> table(1, 0);
        line_check(lines, "model/neg/weight-breaking-map-rejected",
                   hom_violation(one, capsp, table).has_value(), "the broken map was accepted");
        line_check(lines, "model/neg/no-global-sections",
                   enumerate_homs(one, capsp).empty(), "found a global section of Cap");
    }
    line_check(lines, "model/box/cap-carrier-empty", functor_box(capsp).space->size() == 0,
               "box of the capability space is inhabited");
    line_check(lines, "model/box/all-safe-carrier-kept",
               functor_box(zero).space->size() == zero->size(),
               "box dropped an all-safe element");
    line_check(lines, "model/space/product-size",
               space_product(r1, r1)->size() == r1->size() * r1->size(),
               "product carrier size is not the square");

    for (auto& l : check_ccc(r1, r2, c1, caps, "model/ccc/t0")) lines.push_back(l);
    for (auto& l : check_ccc(r2, split, c2, caps, "model/ccc/t1")) lines.push_back(l);
    for (auto& l : check_ccc(split, r1, c1, caps, "model/ccc/t2")) lines.push_back(l);
    for (auto& l : check_ccc(one, r1, one, caps, "model/ccc/terminal")) lines.push_back(l);

    for (auto& l : check_tensor_hom(r1, r2, c1, caps, "model/tensor/t0")) lines.push_back(l);
    for (auto& l : check_tensor_hom(split, r1, c2, caps, "model/tensor/t1")) lines.push_back(l);
    for (auto& l : check_tensor_hom(capsp, r2, c1, caps, "model/tensor/t2")) lines.push_back(l);
    for (auto& l : check_tensor_hom(one, r1, one, caps, "model/tensor/terminal"))
        lines.push_back(l);
    {
        SpacePtr cc = space_tensor(capsp, capsp);
        bool overlap_empty = true, disjoint_kept = true;
        if (opts.caps >= 2) {
            overlap_empty = cc->weights[pair_id(0, 0, capsp->size())].empty();
            disjoint_kept = cc->weighted(pair_id(0, 1, capsp->size()), 0b11);
        }
        line_check(lines, "model/tensor/disjointness", overlap_empty && disjoint_kept,
                   "tensor weights ignore the disjointness condition");
    }

    for (auto& l : check_monad(r1, r2, monoid, caps, "model/monad/" + monoid.name))
        lines.push_back(l);
    for (const auto& control : {monoid_trivial(), monoid_trunc2(), monoid_idem()}) {
        TSpace ta = functor_T(r1, control);
        TSpace tb = functor_T(r2, control);
        TSpace tab = functor_T(space_product(r1, r2), control);
        int k = static_cast<int>(ta.channels.size());
        bool witness = false;
        for (int ita = 0; ita < ta.space->size() && !witness; ++ita)
            for (int itb = 0; itb < tb.space->size(); ++itb) {
                auto o1 = ta.out_of(ita);
                auto o2 = tb.out_of(itb);
                std::vector<int> alpha(k), beta(k);
                for (int i = 0; i < k; ++i) {
                    alpha[i] = control.times(o1[i], o2[i]);
                    beta[i] = control.times(o2[i], o1[i]);
                }
                int pv = pair_id(ta.value_of(ita), tb.value_of(itb), r2->size());
                if (tab.elem(pv, alpha) != tab.elem(pv, beta)) witness = true;
            }
        bool expect = !control.commutative();
        line_check(lines, "model/monad/order-sensitivity/" + control.name, witness == expect,
                   expect ? "expected an evaluation-order witness" : "expected commutativity");
    }

    for (auto& l : check_comonad(r1, r2, caps, "model/comonad/t0")) lines.push_back(l);
    for (auto& l : check_comonad(split, r2, caps, "model/comonad/t1")) lines.push_back(l);
    for (auto& l : check_comonad(zero, capsp, caps, "model/comonad/t2")) lines.push_back(l);

    for (auto& l : check_cancellation(r1, monoid, caps, "model/cancellation/t0"))
        lines.push_back(l);
    for (auto& l : check_cancellation(split, monoid, caps, "model/cancellation/split"))
        lines.push_back(l);

    {
        SpacePtr u1 = gen_space(rng, "U1", opts.max_carrier, u, true);
        SpacePtr u2 = gen_space(rng, "U2", opts.max_carrier, u, true);
        SpacePtr u3 = gen_space(rng, "U3", opts.max_carrier, u, true);
        for (auto& l : check_functoriality(u1, u2, u3, monoid, "model/functor"))
            lines.push_back(l);
    }

    for (auto& l : check_exception(r1, caps, "model/exception/t0")) lines.push_back(l);
    {
        SpacePtr two = make_space("Two", u, {{0}, {0, 1}}, {"a0", "a1"});
        for (auto& l : check_exception(two, caps, "model/exception/two")) lines.push_back(l);
    }

    {
        SpacePtr sbase = make_space("SBase", 0b1, {{0}, {1}}, {"s0", "s1"});
        for (auto& l : check_state(sbase, 1, 2, "model/state")) lines.push_back(l);
    }

    for (auto& l : check_interp_coherence(opts.seed, 60)) lines.push_back(l);
    return lines;
}

} // namespace capcalc::model
