#include "qkdrates/schur_efm.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <set>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "qkdrates/core_math.hpp"
#include "qkdrates/errors.hpp"
#include "qkdrates/parallel.hpp"

namespace qkdrates {

int Configuration::n() const { return std::accumulate(counts.begin(), counts.end(), 0); }

std::vector<std::vector<int>> configuration_states(const Configuration& config) {
    std::vector<int> s;
    for (int letter = 0; letter < config.q(); ++letter) s.insert(s.end(), config.counts[letter], letter);
    std::vector<std::vector<int>> out;
    do {
        out.push_back(s);
    } while (std::next_permutation(s.begin(), s.end()));
    return out;
}

std::uint64_t configuration_dimension(const Configuration& config) {
    std::uint64_t d = 1;
    int placed = 0;
    for (int c : config.counts) {
        placed += c;
        d *= binomial(placed, c);
    }
    return d;
}

std::vector<Configuration> all_configurations(int n, int q) {
    std::vector<Configuration> out;
    std::vector<int> counts(q, 0);
    std::function<void(int, int)> rec = [&](int letter, int remaining) {
        if (letter == q - 1) {
            counts[letter] = remaining;
            out.push_back({counts});
            return;
        }
        for (int c = remaining; c >= 0; --c) {
            counts[letter] = c;
            rec(letter + 1, remaining - c);
        }
    };
    rec(0, n);
    return out;
}

long lambda2(const Partition& nu) {
    long n = 0;
    long s = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        n += nu[i];
        s += static_cast<long>(nu[i]) * (nu[i] - 2 * static_cast<long>(i + 1));
    }
    return (n + s) / 2;
}

long lambda3(const Partition& nu) {
    long n = 0;
    long s = 0;
    for (std::size_t r = 0; r < nu.size(); ++r) {
        const long i = static_cast<long>(r + 1);
        const long v = nu[r];
        n += v;
        s += v * (2 * v * v - (6 * i - 3) * v + 6 * i * (i - 1));
    }
    return (4 * n - 3 * n * n + s) / 6;
}

std::uint64_t symmetric_group_dimension(const Partition& nu) {
    int n = 0;
    for (int v : nu) n += v;
    long double d = 1.0L;
    for (int k = 2; k <= n; ++k) d *= k;
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (int j = 0; j < nu[i]; ++j) {
            int below = 0;
            for (std::size_t r = i + 1; r < nu.size() && nu[r] > j; ++r) ++below;
            d /= (nu[i] - j - 1) + below + 1;
        }
    return static_cast<std::uint64_t>(std::llround(d));
}

std::uint64_t general_linear_dimension(const Partition& nu, int q) {
    long double d = 1.0L;
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (int j = 0; j < nu[i]; ++j) {
            int below = 0;
            for (std::size_t r = i + 1; r < nu.size() && nu[r] > j; ++r) ++below;
            d *= static_cast<long double>(q + j - static_cast<int>(i)) / ((nu[i] - j - 1) + below + 1);
        }
    return static_cast<std::uint64_t>(std::llround(d));
}

std::vector<Partition> partitions(int n, int max_rows) {
    std::vector<Partition> out;
    Partition cur;
    std::function<void(int, int)> rec = [&](int remaining, int max_part) {
        if (remaining == 0) {
            out.push_back(cur);
            return;
        }
        if (static_cast<int>(cur.size()) == max_rows) return;
        for (int p = std::min(remaining, max_part); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p);
            cur.pop_back();
        }
    };
    rec(n, n);
    return out;
}

std::uint64_t state_index(const std::vector<int>& letters, int q) {
    std::uint64_t idx = 0;
    for (int l : letters) idx = idx * q + static_cast<std::uint64_t>(l);
    return idx;
}

std::vector<int> state_letters(std::uint64_t index, int n, int q) {
    std::vector<int> out(n);
    for (int t = n - 1; t >= 0; --t) {
        out[t] = static_cast<int>(index % q);
        index /= q;
    }
    return out;
}

namespace {

struct ConfigSpace {
    Configuration config;
    std::vector<std::vector<int>> states;
    std::vector<std::uint64_t> indices;

    explicit ConfigSpace(const Configuration& c) : config(c), states(configuration_states(c)) {
        indices.reserve(states.size());
        for (const auto& s : states) indices.push_back(state_index(s, c.q()));
    }

    Eigen::Index locate(const std::vector<int>& s) const {
        const auto idx = state_index(s, config.q());
        const auto it = std::lower_bound(indices.begin(), indices.end(), idx);
        return static_cast<Eigen::Index>(it - indices.begin());
    }
};

void check_sites(int n, const Configuration& config) {
    if (n >= kMaxSites) throw UnsupportedRangeError("class operators are limited to fewer than 15 sites");
    if (config.n() != n) throw DomainError("configuration does not match the number of sites");
}

// Adds the class sum over cycles on the given site subset for every state.
template <class SiteSelector>
Eigen::MatrixXd cycle_class_sum(const ConfigSpace& space, int cycle_len, SiteSelector sites_of) {
    const auto d = static_cast<Eigen::Index>(space.states.size());
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (Eigen::Index col = 0; col < d; ++col) {
        const auto& s = space.states[col];
        const std::vector<int> sites = sites_of(s);
        const int k = static_cast<int>(sites.size());
        std::vector<int> t = s;
        if (cycle_len == 2) {
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b) {
                    std::swap(t[sites[a]], t[sites[b]]);
                    m(space.locate(t), col) += 1.0;
                    std::swap(t[sites[a]], t[sites[b]]);
                }
        } else {
            for (int a = 0; a < k; ++a)
                for (int b = a + 1; b < k; ++b)
                    for (int c = b + 1; c < k; ++c) {
                        const int x = sites[a], y = sites[b], z = sites[c];
                        t[y] = s[x];
                        t[z] = s[y];
                        t[x] = s[z];
                        m(space.locate(t), col) += 1.0;
                        t[z] = s[x];
                        t[x] = s[y];
                        t[y] = s[z];
                        m(space.locate(t), col) += 1.0;
                        t[x] = s[x];
                        t[y] = s[y];
                        t[z] = s[z];
                    }
        }
    }
    return m;
}

std::vector<int> occupied_levels(const Configuration& config) {
    std::vector<int> out;
    for (int l = 0; l < config.q(); ++l)
        if (config.counts[l] > 0) out.push_back(l);
    return out;
}

Eigen::MatrixXd class_operator_on(const ConfigSpace& space, int cycle_len, int k) {
    return cycle_class_sum(space, cycle_len, [k](const std::vector<int>&) {
        std::vector<int> sites(k);
        std::iota(sites.begin(), sites.end(), 0);
        return sites;
    });
}

Eigen::MatrixXd intrinsic_operator_on(const ConfigSpace& space, int cycle_len, int chain_index) {
    const auto levels = occupied_levels(space.config);
    const int top = levels[chain_index - 1];
    return cycle_class_sum(space, cycle_len, [top](const std::vector<int>& s) {
        std::vector<int> sites;
        for (int i = 0; i < static_cast<int>(s.size()); ++i)
            if (s[i] <= top) sites.push_back(i);
        return sites;
    });
}

void check_cycle_len(int cycle_len) {
    if (cycle_len != 2 && cycle_len != 3) throw DomainError("cycle length must be 2 or 3");
}

}  // namespace

Eigen::MatrixXd class_operator(int n, int cycle_len, int subgroup_size, const Configuration& config) {
    check_sites(n, config);
    check_cycle_len(cycle_len);
    if (subgroup_size < 1 || subgroup_size > n) throw DomainError("subgroup size outside [1, n]");
    return class_operator_on(ConfigSpace(config), cycle_len, subgroup_size);
}

Eigen::MatrixXd intrinsic_class_operator(int n, int cycle_len, int chain_index, const Configuration& config) {
    check_sites(n, config);
    check_cycle_len(cycle_len);
    const auto levels = occupied_levels(config);
    if (chain_index < 1 || chain_index > static_cast<int>(levels.size()))
        throw DomainError("chain index not available for this configuration");
    return intrinsic_operator_on(ConfigSpace(config), cycle_len, chain_index);
}

namespace {

enum class OpKind { SymmetricC2, SymmetricC3, IntrinsicC2, IntrinsicC3 };

struct LabeledOp {
    OpKind kind;
    int index;  // subgroup size or chain index
    Eigen::MatrixXd matrix;
};

// Joint eigenvectors of commuting integer-spectrum operators, columns of the
// returned matrix, with snapped joint eigenvalues.
struct JointEigen {
    Eigen::MatrixXd vectors;
    std::vector<std::vector<long>> values;  // per vector, per operator
};

bool snap_all(const std::vector<LabeledOp>& ops, const Eigen::MatrixXd& vecs, std::vector<std::vector<long>>& out) {
    out.assign(vecs.cols(), std::vector<long>(ops.size()));
    for (Eigen::Index c = 0; c < vecs.cols(); ++c) {
        const Eigen::VectorXd v = vecs.col(c);
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const double rq = v.dot(ops[i].matrix * v);
            const double r = std::round(rq);
            if (std::abs(rq - r) > kEigenSnapTol) return false;
            out[c][i] = static_cast<long>(r);
        }
    }
    return true;
}

JointEigen diagonalize_generic(const std::vector<LabeledOp>& ops, Eigen::Index d) {
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                                 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151};
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < ops.size(); ++i) m += std::log(static_cast<double>(primes[i % 36])) / (1.0 + i / 36) * ops[i].matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success) throw ConvergenceError("eigensolver failed on class operator combination");
    JointEigen je;
    je.vectors = es.eigenvectors();
    if (snap_all(ops, je.vectors, je.values)) return je;

    // Near-coincident eigenvalues of the combination: split the space one
    // operator at a time instead.
    std::vector<Eigen::MatrixXd> blocks{Eigen::MatrixXd::Identity(d, d)};
    for (const auto& op : ops) {
        std::vector<Eigen::MatrixXd> next;
        for (const auto& b : blocks) {
            if (b.cols() == 1) {
                next.push_back(b);
                continue;
            }
            const Eigen::MatrixXd sub = b.transpose() * op.matrix * b;
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ses(0.5 * (sub + sub.transpose()));
            const Eigen::MatrixXd rotated = b * ses.eigenvectors();
            Eigen::Index start = 0;
            const auto& ev = ses.eigenvalues();
            for (Eigen::Index i = 1; i <= ev.size(); ++i) {
                if (i == ev.size() || std::round(ev(i)) != std::round(ev(start))) {
                    next.push_back(rotated.middleCols(start, i - start));
                    start = i;
                }
            }
        }
        blocks = std::move(next);
    }
    Eigen::MatrixXd vecs(d, d);
    Eigen::Index col = 0;
    for (const auto& b : blocks) {
        if (b.cols() != 1) throw DegeneracyError("class operators do not resolve the configuration subspace");
        vecs.col(col++) = b.col(0);
    }
    je.vectors = vecs;
    if (!snap_all(ops, je.vectors, je.values)) throw DegeneracyError("class operator eigenvalue not integral");
    return je;
}

Tableau young_tableau_from_chain(const std::vector<long>& eig_by_size, int n, Partition& shape) {
    // eig_by_size[k] = lambda2 of C_2 on S_k, k = 1..n.
    shape = {1};
    Tableau t{{1}};
    for (int k = 2; k <= n; ++k) {
        const long step = eig_by_size[k] - eig_by_size[k - 1];
        int chosen = -1;
        for (int r = 0; r <= static_cast<int>(shape.size()); ++r) {
            const int len = r < static_cast<int>(shape.size()) ? shape[r] : 0;
            if (r > 0 && shape[r - 1] <= len) continue;
            if (len - r == step) {
                if (chosen >= 0) throw DegeneracyError("ambiguous branching step");
                chosen = r;
            }
        }
        if (chosen < 0) throw DegeneracyError("class operator eigenvalues do not form a branching path");
        if (chosen == static_cast<int>(shape.size())) {
            shape.push_back(0);
            t.emplace_back();
        }
        ++shape[chosen];
        t[chosen].push_back(k);
    }
    return t;
}

bool horizontal_strip(const Partition& outer, const Partition& inner) {
    for (std::size_t i = 0; i < outer.size(); ++i) {
        const int in = i < inner.size() ? inner[i] : 0;
        const int below = i + 1 < outer.size() ? outer[i + 1] : 0;
        if (in > outer[i] || in < below) return false;
    }
    return inner.size() <= outer.size();
}

Partition find_inner_shape(const Partition& outer, int size, long l2, long l3, bool use_l3) {
    Partition found;
    int hits = 0;
    for (const auto& mu : partitions(size, static_cast<int>(outer.size()))) {
        if (!horizontal_strip(outer, mu)) continue;
        if (lambda2(mu) != l2) continue;
        if (use_l3 && lambda3(mu) != l3) continue;
        found = mu;
        ++hits;
    }
    if (hits != 1) throw DegeneracyError("intrinsic class operator eigenvalues do not identify a Weyl tableau");
    return found;
}

// Sign pattern such that the representation matrices of adjacent
// transpositions have positive off-diagonal entries in every copy.
void fix_relative_phases(std::vector<SchurVector*>& group, const ConfigSpace& space, int n) {
    std::map<Tableau, std::size_t> by_tableau;
    for (std::size_t i = 0; i < group.size(); ++i) by_tableau[group[i]->tableau] = i;
    const auto d = static_cast<Eigen::Index>(space.states.size());
    auto dense = [&](const SchurVector& v) {
        Eigen::VectorXd x = Eigen::VectorXd::Zero(d);
        for (const auto& [idx, c] : v.coeffs) {
            const auto it = std::lower_bound(space.indices.begin(), space.indices.end(), idx);
            x(it - space.indices.begin()) = c;
        }
        return x;
    };
    std::vector<char> seen(group.size(), 0);
    std::deque<std::size_t> queue{0};
    seen[0] = 1;
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        const Tableau& t = group[cur]->tableau;
        std::vector<std::pair<int, int>> pos(n + 1);
        for (int r = 0; r < static_cast<int>(t.size()); ++r)
            for (int c = 0; c < static_cast<int>(t[r].size()); ++c) pos[t[r][c]] = {r, c};
        const Eigen::VectorXd x = dense(*group[cur]);
        for (int k = 1; k < n; ++k) {
            if (pos[k].first == pos[k + 1].first || pos[k].second == pos[k + 1].second) continue;
            Tableau swapped = t;
            swapped[pos[k].first][pos[k].second] = k + 1;
            swapped[pos[k + 1].first][pos[k + 1].second] = k;
            const auto it = by_tableau.find(swapped);
            if (it == by_tableau.end()) throw DegeneracyError("missing Young tableau partner");
            const std::size_t nb = it->second;
            if (seen[nb]) continue;
            // <neighbour| D(s_k) |current>
            const Eigen::VectorXd y = dense(*group[nb]);
            double overlap = 0.0;
            for (Eigen::Index i = 0; i < d; ++i) {
                if (x(i) == 0.0) continue;
                std::vector<int> s = space.states[i];
                std::swap(s[k - 1], s[k]);
                overlap += x(i) * y(space.locate(s));
            }
            if (overlap < 0.0)
                for (auto& [idx, c] : group[nb]->coeffs) c = -c;
            seen[nb] = 1;
            queue.push_back(nb);
        }
    }
    for (char s : seen)
        if (!s) throw DegeneracyError("Young tableaux of one irrep copy are not connected");
}

struct SortKey {
    std::vector<int> nu;
    std::vector<int> gelfand;
    std::vector<long> eigs;
};

SortKey sort_key(const SchurVector& v, int q) {
    SortKey k;
    k.nu = v.nu;
    k.nu.resize(q, 0);
    for (const auto& row : v.gelfand) k.gelfand.insert(k.gelfand.end(), row.begin(), row.end());
    k.eigs = v.tableau_eigs;
    return k;
}

std::vector<SchurVector> build_configuration(int n, const Configuration& config) {
    const ConfigSpace space(config);
    const auto d = static_cast<Eigen::Index>(space.states.size());
    const auto levels = occupied_levels(config);
    const int l = static_cast<int>(levels.size());

    std::vector<LabeledOp> ops;
    for (int k = 2; k <= n; ++k) ops.push_back({OpKind::SymmetricC2, k, class_operator_on(space, 2, k)});
    if (n >= 6) ops.push_back({OpKind::SymmetricC3, n, class_operator_on(space, 3, n)});
    for (int j = 2; j < l; ++j) {
        ops.push_back({OpKind::IntrinsicC2, j, intrinsic_operator_on(space, 2, j)});
        ops.push_back({OpKind::IntrinsicC3, j, intrinsic_operator_on(space, 3, j)});
    }

    JointEigen je;
    if (ops.empty()) {
        je.vectors = Eigen::MatrixXd::Identity(d, d);
        je.values.assign(d, {});
    } else {
        je = diagonalize_generic(ops, d);
    }

    std::vector<int> prefix_size(l + 1, 0);
    for (int j = 1; j <= l; ++j) prefix_size[j] = prefix_size[j - 1] + config.counts[levels[j - 1]];

    std::vector<SchurVector> out;
    out.reserve(d);
    for (Eigen::Index c = 0; c < d; ++c) {
        std::vector<long> chain(n + 1, 0);
        std::map<int, long> intr2, intr3;
        for (std::size_t i = 0; i < ops.size(); ++i) {
            const long v = je.values[c][i];
            switch (ops[i].kind) {
                case OpKind::SymmetricC2: chain[ops[i].index] = v; break;
                case OpKind::IntrinsicC2: intr2[ops[i].index] = v; break;
                case OpKind::IntrinsicC3: intr3[ops[i].index] = v; break;
                case OpKind::SymmetricC3: break;
            }
        }
        SchurVector sv;
        sv.counts = config.counts;
        sv.tableau = young_tableau_from_chain(chain, n, sv.nu);
        if (n >= 6) {
            const auto it = std::find_if(ops.begin(), ops.end(), [](const LabeledOp& o) { return o.kind == OpKind::SymmetricC3; });
            if (je.values[c][it - ops.begin()] != lambda3(sv.nu))
                throw DegeneracyError("3-cycle eigenvalue disagrees with the branching path");
        }
        if (static_cast<int>(sv.nu.size()) > config.q()) throw DegeneracyError("Young diagram has more rows than levels");
        for (int k = n; k >= 2; --k) sv.tableau_eigs.push_back(chain[k]);

        // Shapes of the sub-tableaux holding the first j occupied levels.
        std::vector<Partition> shape(l + 1);
        shape[l] = sv.nu;
        for (int j = l - 1; j >= 1; --j) {
            if (j == 1) {
                shape[1] = {prefix_size[1]};
                if (!horizontal_strip(shape[2], shape[1])) throw DegeneracyError("invalid Weyl tableau");
            } else {
                shape[j] = find_inner_shape(shape[j + 1], prefix_size[j], intr2.at(j), intr3.at(j), prefix_size[j] >= 6);
            }
        }
        sv.weyl.assign(sv.nu.size(), {});
        for (int j = 1; j <= l; ++j)
            for (std::size_t r = 0; r < shape[j].size(); ++r) {
                const int from = (r < shape[j - 1].size()) ? shape[j - 1][r] : 0;
                for (int col = from; col < shape[j][r]; ++col) sv.weyl[r].push_back(levels[j - 1]);
            }
        const int q = config.q();
        for (int t = 0; t < q; ++t) {
            const int max_letter = q - 1 - t;
            int j = 0;
            while (j < l && levels[j] <= max_letter) ++j;
            std::vector<int> row(q - t, 0);
            for (std::size_t r = 0; r < shape[j].size() && r < row.size(); ++r) row[r] = shape[j][r];
            sv.gelfand.push_back(row);
        }
        for (Eigen::Index i = 0; i < d; ++i) {
            const double a = je.vectors(i, c);
            if (std::abs(a) > 1e-12) sv.coeffs.emplace_back(space.indices[i], a);
        }
        out.push_back(std::move(sv));
    }

    // Group by Weyl tableau, order tableaux, fix phases.
    std::map<Tableau, std::vector<SchurVector*>> groups;
    for (auto& v : out) groups[v.weyl].push_back(&v);
    for (auto& [weyl, group] : groups) {
        std::sort(group.begin(), group.end(),
                  [](const SchurVector* a, const SchurVector* b) { return a->tableau_eigs > b->tableau_eigs; });
        fix_relative_phases(group, space, n);
        // Principal state of the leading tableau: site i carries the level
        // found in the Weyl box that holds number i.
        const SchurVector& lead = *group.front();
        std::vector<int> principal(n);
        for (std::size_t r = 0; r < lead.tableau.size(); ++r)
            for (std::size_t c = 0; c < lead.tableau[r].size(); ++c) principal[lead.tableau[r][c] - 1] = weyl[r][c];
        const auto pidx = state_index(principal, config.q());
        double pc = 0.0;
        for (const auto& [idx, a] : lead.coeffs)
            if (idx == pidx) pc = a;
        if (std::abs(pc) < 1e-10) throw DegeneracyError("principal term vanishes");
        if (pc < 0.0)
            for (SchurVector* v : group)
                for (auto& [idx, a] : v->coeffs) a = -a;
    }
    return out;
}

}  // namespace

SchurBasis schur_basis(int n, int q, double budget) {
    if (n < 1 || q < 1) throw DomainError("schur_basis: n and q must be positive");
    if (n >= kMaxSites) throw UnsupportedRangeError("Schur basis construction is limited to fewer than 15 sites");
    if (std::pow(static_cast<double>(q), n) > budget) throw BudgetError("q^n exceeds the Schur basis budget");
    const auto configs = all_configurations(n, q);
    std::vector<std::vector<SchurVector>> parts(configs.size());
    parallel_for(configs.size(), [&](std::size_t i) { parts[i] = build_configuration(n, configs[i]); });
    SchurBasis basis;
    basis.n = n;
    basis.q = q;
    for (auto& p : parts)
        for (auto& v : p) basis.vectors.push_back(std::move(v));
    std::stable_sort(basis.vectors.begin(), basis.vectors.end(), [q](const SchurVector& a, const SchurVector& b) {
        const SortKey ka = sort_key(a, q), kb = sort_key(b, q);
        return std::tie(ka.nu, ka.gelfand, ka.eigs) > std::tie(kb.nu, kb.gelfand, kb.eigs);
    });
    return basis;
}

const SchurBasis& cached_schur_basis(int n, int q, double budget) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::unique_ptr<SchurBasis>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{n, q}];
    if (!slot) slot = std::make_unique<SchurBasis>(schur_basis(n, q, budget));
    return *slot;
}

namespace {

// rho^(x)n applied to a sparse vector, densely in the q^n space.
Eigen::VectorXcd apply_tensor_power(const Eigen::MatrixXcd& rho, int n, int q,
                                    const std::vector<std::pair<std::uint64_t, double>>& coeffs) {
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) total *= q;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(total));
    for (const auto& [idx, a] : coeffs) x(static_cast<Eigen::Index>(idx)) = a;
    Eigen::VectorXcd y(x.size());
    std::uint64_t stride = 1;
    for (int site = n - 1; site >= 0; --site) {
        const std::uint64_t block = stride * q;
        for (std::uint64_t base = 0; base < total; base += block)
            for (std::uint64_t off = 0; off < stride; ++off)
                for (int a = 0; a < q; ++a) {
                    std::complex<double> acc = 0.0;
                    for (int b = 0; b < q; ++b) acc += rho(a, b) * x(static_cast<Eigen::Index>(base + b * stride + off));
                    y(static_cast<Eigen::Index>(base + a * stride + off)) = acc;
                }
        x.swap(y);
        stride = block;
    }
    return x;
}

}  // namespace

std::vector<IrrepBlockMatrix> block_project(const SchurBasis& basis, const Eigen::MatrixXcd& rho, int tableau_choice) {
    if (rho.rows() != basis.q || rho.cols() != basis.q) throw ShapeError("block_project: rho has the wrong dimension");
    std::vector<Partition> order;
    std::map<Partition, std::vector<const SchurVector*>> by_nu;
    for (const auto& v : basis.vectors) {
        if (!by_nu.count(v.nu)) order.push_back(v.nu);
        by_nu[v.nu].push_back(&v);
    }
    if (tableau_choice < 0) throw DomainError("block_project: negative tableau choice");
    std::map<Partition, std::set<Tableau>> copies;
    for (const auto& v : basis.vectors) copies[v.nu].insert(v.tableau);
    std::size_t most_copies = 0;
    for (const auto& [nu, ts] : copies) most_copies = std::max(most_copies, ts.size());
    if (static_cast<std::size_t>(tableau_choice) >= most_copies)
        throw DomainError("block_project: tableau choice out of range");
    std::vector<IrrepBlockMatrix> out(order.size());
    parallel_for(order.size(), [&](std::size_t oi) {
        const auto& all = by_nu.at(order[oi]);
        std::vector<Tableau> tableaux;
        for (const SchurVector* v : all)
            if (std::find(tableaux.begin(), tableaux.end(), v->tableau) == tableaux.end()) tableaux.push_back(v->tableau);
        const Tableau& pick = tableaux[std::min<std::size_t>(tableau_choice, tableaux.size() - 1)];
        std::vector<const SchurVector*> vs;
        for (const SchurVector* v : all)
            if (v->tableau == pick) vs.push_back(v);
        const auto h = static_cast<Eigen::Index>(vs.size());
        Eigen::MatrixXcd blk(h, h);
        for (Eigen::Index c = 0; c < h; ++c) {
            const Eigen::VectorXcd x = apply_tensor_power(rho, basis.n, basis.q, vs[c]->coeffs);
            for (Eigen::Index r = 0; r < h; ++r) {
                std::complex<double> acc = 0.0;
                for (const auto& [idx, a] : vs[r]->coeffs) acc += a * x(static_cast<Eigen::Index>(idx));
                blk(r, c) = acc;
            }
        }
        out[oi].nu = order[oi];
        out[oi].block = blk;
        out[oi].multiplicity = tableaux.size();
    });
    return out;
}

double tensor_power_mixture_entropy(const SchurBasis& basis, const std::vector<double>& weights,
                                    const std::vector<Eigen::MatrixXcd>& states) {
    if (weights.size() != states.size()) throw ShapeError("weights and states differ in length");
    std::vector<std::vector<IrrepBlockMatrix>> blocks;
    for (const auto& s : states) blocks.push_back(block_project(basis, s));
    const std::size_t nb = blocks.empty() ? 0 : blocks[0].size();
    std::vector<double> parts(nb, 0.0);
    for (std::size_t b = 0; b < nb; ++b) {
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(blocks[0][b].block.rows(), blocks[0][b].block.cols());
        for (std::size_t i = 0; i < states.size(); ++i) m += weights[i] * blocks[i][b].block;
        m = 0.5 * (m + m.adjoint()).eval();
        parts[b] = static_cast<double>(blocks[0][b].multiplicity) * von_neumann_entropy(m);
    }
    return pairwise_sum(parts);
}

}  // namespace qkdrates
