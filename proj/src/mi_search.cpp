#include "marclab/mi_search.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>
#include <thread>

#include "marclab/info_measures.hpp"
#include "marclab/rng.hpp"

namespace marclab {

DistFamily DistFamily::joint_inputs(const DmChannel& ch) {
    return {{FamilyFactor{{}, {{kX1, ch.x1_size()}, {kX2, ch.x2_size()}, {kX3, ch.x3_size()}}}}};
}

DistFamily DistFamily::product_inputs(const DmChannel& ch) {
    return {{FamilyFactor{{}, {{kX1, ch.x1_size()}}},
             FamilyFactor{{}, {{kX2, ch.x2_size()}}},
             FamilyFactor{{}, {{kX3, ch.x3_size()}}}}};
}

DistFamily DistFamily::aux_broadcast(const DmChannel& ch, int aux_cardinality) {
    if (aux_cardinality < 1) throw std::invalid_argument("aux cardinality must be >= 1");
    const VariableId v{"V", aux_cardinality};
    return {{FamilyFactor{{}, {v}},
             FamilyFactor{{v}, {{kX1, ch.x1_size()}, {kX2, ch.x2_size()}}},
             FamilyFactor{{v}, {{kX3, ch.x3_size()}}}}};
}

namespace {

// One simplex row of a family factor inside the flattened parameter vector.
struct RowSpec {
    std::size_t offset;
    std::size_t cells;
};

struct SearchSpace {
    std::vector<RowSpec> rows;
    std::size_t total = 0;

    explicit SearchSpace(const DistFamily& family) {
        for (const auto& f : family.factors) {
            std::size_t gcells = 1, ocells = 1;
            for (const auto& v : f.given) gcells *= static_cast<std::size_t>(v.alphabet_size);
            for (const auto& v : f.outputs) ocells *= static_cast<std::size_t>(v.alphabet_size);
            for (std::size_t g = 0; g < gcells; ++g) {
                rows.push_back({total, ocells});
                total += ocells;
            }
        }
    }
};

// Evaluates the objective without constructing JointPmf objects: the induced
// joint and the four entropy marginalizations are precomputed as flat index
// maps, so one evaluation is a handful of linear passes.
class Evaluator {
public:
    Evaluator(const DmChannel& ch, const MiObjective& obj, const DistFamily& family)
        : ch_(ch), family_(family), space_(family) {
        // full variable list: family outputs then channel outputs
        std::vector<VariableId> vars;
        for (const auto& f : family.factors)
            for (const auto& v : f.outputs) vars.push_back(v);
        vars.push_back(ch.law.outputs()[0]);
        vars.push_back(ch.law.outputs()[1]);

        auto axis_of = [&vars](const std::string& name) {
            for (std::size_t i = 0; i < vars.size(); ++i)
                if (vars[i].name == name) return static_cast<int>(i);
            throw std::invalid_argument("objective/family references unknown variable '" + name +
                                        "'");
        };

        cells_ = 1;
        for (const auto& v : vars) cells_ *= static_cast<std::size_t>(v.alphabet_size);
        std::vector<std::size_t> strides(vars.size(), 1);
        for (std::size_t i = vars.size(); i-- > 1;)
            strides[i - 1] = strides[i] * static_cast<std::size_t>(vars[i].alphabet_size);

        // per-cell flat row indices: one per family factor (into theta rows)
        // and one into the channel kernel
        std::vector<int> sym(vars.size());
        factor_row_.assign(family.factors.size(), std::vector<std::uint32_t>(cells_));
        chan_index_.resize(cells_);
        const auto scope_index = [&](const std::vector<VariableId>& scope, const auto& symbols) {
            std::size_t idx = 0;
            for (const auto& v : scope) idx = idx * v.alphabet_size + symbols[axis_of(v.name)];
            return idx;
        };
        // row bases: rows of factor fi start at row_base_[fi] in space_.rows
        row_base_.assign(family.factors.size(), 0);
        {
            std::size_t base = 0;
            for (std::size_t fi = 0; fi < family.factors.size(); ++fi) {
                row_base_[fi] = base;
                std::size_t gcells = 1;
                for (const auto& v : family.factors[fi].given)
                    gcells *= static_cast<std::size_t>(v.alphabet_size);
                base += gcells;
            }
        }
        for (std::size_t flat = 0; flat < cells_; ++flat) {
            std::size_t rest = flat;
            for (std::size_t i = 0; i < vars.size(); ++i) {
                sym[i] = static_cast<int>(rest / strides[i]);
                rest %= strides[i];
            }
            for (std::size_t fi = 0; fi < family.factors.size(); ++fi) {
                const auto& f = family.factors[fi];
                const std::size_t g = scope_index(f.given, sym);
                const std::size_t o = scope_index(f.outputs, sym);
                const auto& row = space_.rows[row_base_[fi] + g];
                factor_row_[fi][flat] = static_cast<std::uint32_t>(row.offset + o);
            }
            std::size_t chan = 0;
            for (const auto& v : ch.law.given()) chan = chan * v.alphabet_size + sym[axis_of(v.name)];
            for (const auto& v : ch.law.outputs())
                chan = chan * v.alphabet_size + sym[axis_of(v.name)];
            chan_index_[flat] = static_cast<std::uint32_t>(chan);
        }

        // projection maps for the four entropy scopes of I(a;b|g)
        auto projection = [&](const std::vector<std::string>& scope, std::vector<std::uint32_t>& map,
                              std::size_t& reduced_cells) {
            reduced_cells = 1;
            std::vector<int> axes;
            for (const auto& name : scope) {
                const int a = axis_of(name);
                axes.push_back(a);
                reduced_cells *= static_cast<std::size_t>(vars[a].alphabet_size);
            }
            map.resize(cells_);
            for (std::size_t flat = 0; flat < cells_; ++flat) {
                std::size_t rest = flat, idx = 0;
                for (std::size_t i = 0; i < vars.size(); ++i) {
                    sym[i] = static_cast<int>(rest / strides[i]);
                    rest %= strides[i];
                }
                for (int a : axes) idx = idx * vars[a].alphabet_size + sym[a];
                map[flat] = static_cast<std::uint32_t>(idx);
            }
        };
        std::vector<std::string> ag = obj.a, bg = obj.b, abg = obj.a;
        ag.insert(ag.end(), obj.given.begin(), obj.given.end());
        bg.insert(bg.end(), obj.given.begin(), obj.given.end());
        abg.insert(abg.end(), obj.b.begin(), obj.b.end());
        abg.insert(abg.end(), obj.given.begin(), obj.given.end());
        projection(ag, proj_[0], proj_cells_[0]);
        projection(bg, proj_[1], proj_cells_[1]);
        projection(abg, proj_[2], proj_cells_[2]);
        projection(obj.given, proj_[3], proj_cells_[3]);
        for (int s = 0; s < 4; ++s) scratch_[s].resize(proj_cells_[s]);
        joint_.resize(cells_);
    }

    const SearchSpace& space() const { return space_; }

    // theta rows need not be normalized; rows are renormalized on the fly
    double operator()(const std::vector<double>& theta) {
        ++evals_;
        theta_norm_.resize(theta.size());
        for (const auto& row : space_.rows) {
            double mass = 0.0;
            for (std::size_t c = 0; c < row.cells; ++c) mass += theta[row.offset + c];
            const double inv = mass > 0.0 ? 1.0 / mass : 0.0;
            for (std::size_t c = 0; c < row.cells; ++c)
                theta_norm_[row.offset + c] =
                    mass > 0.0 ? theta[row.offset + c] * inv : 1.0 / static_cast<double>(row.cells);
        }
        // assemble the joint
        const auto& kernel = ch_.law.kernel();
        for (std::size_t flat = 0; flat < cells_; ++flat) joint_[flat] = kernel[chan_index_[flat]];
        for (const auto& rows : factor_row_)
            for (std::size_t flat = 0; flat < cells_; ++flat)
                joint_[flat] *= theta_norm_[rows[flat]];
        // four marginal entropies
        double h[4];
        for (int s = 0; s < 4; ++s) {
            auto& acc = scratch_[s];
            std::fill(acc.begin(), acc.end(), 0.0);
            const auto& map = proj_[s];
            for (std::size_t flat = 0; flat < cells_; ++flat) acc[map[flat]] += joint_[flat];
            double e = 0.0;
            for (double p : acc)
                if (p > 0.0) e -= p * std::log2(p);
            h[s] = e;
        }
        return h[0] + h[1] - h[2] - h[3];
    }

    std::vector<ConditionalPmf> factors(const std::vector<double>& theta) const {
        std::vector<ConditionalPmf> out;
        std::size_t row = 0;
        for (const auto& f : family_.factors) {
            std::size_t gcells = 1, ocells = 1;
            for (const auto& v : f.given) gcells *= static_cast<std::size_t>(v.alphabet_size);
            for (const auto& v : f.outputs) ocells *= static_cast<std::size_t>(v.alphabet_size);
            std::vector<double> kernel(gcells * ocells);
            for (std::size_t g = 0; g < gcells; ++g, ++row) {
                const auto& r = space_.rows[row];
                double mass = 0.0;
                for (std::size_t c = 0; c < r.cells; ++c) mass += theta[r.offset + c];
                for (std::size_t c = 0; c < r.cells; ++c)
                    kernel[g * ocells + c] = mass > 0.0 ? theta[r.offset + c] / mass
                                                        : 1.0 / static_cast<double>(r.cells);
            }
            out.emplace_back(f.given, f.outputs, std::move(kernel));
        }
        return out;
    }

    int evaluations() const { return evals_; }

private:
    const DmChannel& ch_;
    const DistFamily& family_;
    SearchSpace space_;
    std::size_t cells_ = 0;
    std::vector<std::size_t> row_base_;
    std::vector<std::vector<std::uint32_t>> factor_row_;
    std::vector<std::uint32_t> chan_index_;
    std::vector<std::uint32_t> proj_[4];
    std::size_t proj_cells_[4] = {0, 0, 0, 0};
    std::vector<double> scratch_[4];
    std::vector<double> joint_;
    std::vector<double> theta_norm_;
    int evals_ = 0;
};

std::vector<double> uniform_point(const SearchSpace& space) {
    std::vector<double> theta(space.total);
    for (const auto& r : space.rows)
        for (std::size_t c = 0; c < r.cells; ++c)
            theta[r.offset + c] = 1.0 / static_cast<double>(r.cells);
    return theta;
}

std::vector<double> dirichlet_point(const SearchSpace& space, Rng& rng) {
    std::vector<double> theta(space.total);
    for (const auto& r : space.rows) {
        double mass = 0.0;
        for (std::size_t c = 0; c < r.cells; ++c) {
            const double e = rng.exponential();
            theta[r.offset + c] = e;
            mass += e;
        }
        for (std::size_t c = 0; c < r.cells; ++c) theta[r.offset + c] /= mass;
    }
    return theta;
}

// Golden-section maximization of f over t in [0, 1].
template <typename F>
std::pair<double, double> golden_max(F&& f, double tol = 1e-6) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = 0.0, b = 1.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

// Coordinate ascent, one simplex row at a time: every vertex direction is
// probed with a short step, then the most promising direction gets a
// golden-section line search. Sweeps are capped by cfg.max_ascent_sweeps.
double ascend(Evaluator& eval, std::vector<double>& theta, double value, int max_sweeps) {
    const auto& rows = eval.space().rows;
    std::vector<double> trial = theta;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        const double before = value;
        for (const auto& r : rows) {
            if (r.cells < 2) continue;
            auto on_segment = [&](std::size_t vertex, double t) {
                trial = theta;
                for (std::size_t c = 0; c < r.cells; ++c)
                    trial[r.offset + c] =
                        (1.0 - t) * theta[r.offset + c] + (c == vertex ? t : 0.0);
                return eval(trial);
            };
            std::size_t best_vertex = 0;
            double best_probe = -1e300;
            for (std::size_t vertex = 0; vertex < r.cells; ++vertex) {
                const double probe = on_segment(vertex, 0.02);
                if (probe > best_probe) {
                    best_probe = probe;
                    best_vertex = vertex;
                }
            }
            const auto [t_best, f_best] =
                golden_max([&](double t) { return on_segment(best_vertex, t); });
            if (f_best > value + 1e-13) {
                value = f_best;
                for (std::size_t c = 0; c < r.cells; ++c)
                    theta[r.offset + c] = (1.0 - t_best) * theta[r.offset + c] +
                                          (c == best_vertex ? t_best : 0.0);
            } else if (best_probe > value + 1e-13) {
                value = best_probe;
                for (std::size_t c = 0; c < r.cells; ++c)
                    theta[r.offset + c] =
                        0.98 * theta[r.offset + c] + (c == best_vertex ? 0.02 : 0.0);
            }
        }
        if (value - before < 1e-10) break;
    }
    return value;
}

// Simplex grid: all rows stepped over compositions of (g-1) parts. Returns
// false (and evaluates nothing) when the lattice would exceed the budget.
bool grid_best(Evaluator& eval, int points_per_dim, std::vector<double>& best_theta,
               double& best_value) {
    if (points_per_dim < 2) return false;
    const auto& rows = eval.space().rows;
    constexpr double kBudget = 2e5;

    double combos = 1.0;
    for (const auto& r : rows) {
        // C(g-1 + cells-1, cells-1) compositions per row
        double c = 1.0;
        const int n = points_per_dim - 1 + static_cast<int>(r.cells) - 1;
        const int k = static_cast<int>(r.cells) - 1;
        for (int i = 1; i <= k; ++i) c *= static_cast<double>(n - k + i) / i;
        combos *= c;
        if (combos > kBudget) return false;
    }

    // Odometer over per-row composition counters.
    const int steps = points_per_dim - 1;
    std::vector<std::vector<int>> counter(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) counter[i].assign(rows[i].cells, 0);
    for (auto& c : counter) c[0] = steps;

    auto advance_row = [steps](std::vector<int>& c) -> bool {
        // next composition of `steps` into c.size() parts, colex order
        const std::size_t k = c.size();
        if (k == 1) return false;
        int rest = 0;
        for (std::size_t i = 0; i + 1 < k; ++i) rest += c[i];
        if (rest == 0) return false;
        std::size_t i = 0;
        while (c[i] == 0) ++i;
        const int v = c[i];
        c[i] = 0;
        c[i + 1] += 1;
        c[0] = v - 1;
        return true;
    };

    std::vector<double> theta(eval.space().total);
    bool more = true;
    while (more) {
        for (std::size_t i = 0; i < rows.size(); ++i)
            for (std::size_t c = 0; c < rows[i].cells; ++c)
                theta[rows[i].offset + c] = static_cast<double>(counter[i][c]) / steps;
        const double v = eval(theta);
        if (v > best_value) {
            best_value = v;
            best_theta = theta;
        }
        // advance odometer
        std::size_t i = 0;
        for (; i < rows.size(); ++i) {
            if (advance_row(counter[i])) break;
            counter[i].assign(rows[i].cells, 0);
            counter[i][0] = steps;
        }
        more = i < rows.size();
    }
    return true;
}

} // namespace

MiSearchResult maximize_mi(const DmChannel& ch, const MiObjective& objective,
                           const DistFamily& family, const SearchConfig& cfg) {
    if (family.factors.empty()) throw std::invalid_argument("empty distribution family");

    Evaluator eval(ch, objective, family);

    std::vector<double> best = uniform_point(eval.space());
    double best_value = eval(best);
    best_value = ascend(eval, best, best_value, cfg.max_ascent_sweeps);

    std::vector<double> grid_theta = best;
    double grid_value = best_value;
    if (grid_best(eval, cfg.grid_points_per_simplex_dim, grid_theta, grid_value) &&
        grid_value > best_value) {
        grid_value = ascend(eval, grid_theta, grid_value, cfg.max_ascent_sweeps);
        if (grid_value > best_value) {
            best_value = grid_value;
            best = grid_theta;
        }
    }

    // Restarts own derived seeds so scheduling cannot change the outcome;
    // results are folded in restart order.
    const int restarts = std::max(cfg.random_restarts, 0);
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    std::vector<std::future<std::pair<double, std::vector<double>>>> futures;
    futures.reserve(restarts);
    for (int rs = 0; rs < restarts; ++rs) {
        futures.push_back(std::async(
            restarts > 1 && workers > 1 ? std::launch::async : std::launch::deferred,
            [&, rs]() {
                Evaluator local(ch, objective, family);
                Rng rng(cfg.seed + static_cast<std::uint64_t>(rs));
                std::vector<double> theta = dirichlet_point(local.space(), rng);
                double v = local(theta);
                v = ascend(local, theta, v, cfg.max_ascent_sweeps);
                return std::make_pair(v, std::move(theta));
            }));
    }
    for (auto& fut : futures) {
        auto [v, theta] = fut.get();
        if (v > best_value) {
            best_value = v;
            best = std::move(theta);
        }
    }

    MiSearchResult result;
    result.best_bits = best_value;
    result.best_factors = eval.factors(best);
    result.evaluations = eval.evaluations();
    return result;
}

} // namespace marclab
