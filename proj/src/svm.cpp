#include "specgraph/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "specgraph/error.hpp"
#include "specgraph/metrics.hpp"
#include "specgraph/parallel.hpp"

namespace specgraph {

namespace {

constexpr double kTau = 1e-12;

void check_dimensions(std::span<const FeatureVector> xs, const char* where) {
    if (xs.empty()) return;
    const auto d = xs.front().size();
    for (const auto& x : xs)
        if (x.size() != d) throw ContractError(std::string(where) + ": feature vectors differ in dimension");
}

// Class indices in sorted-label order.
std::vector<int> sorted_classes(std::span<const int> ys) {
    std::set<int> s(ys.begin(), ys.end());
    return {s.begin(), s.end()};
}

struct PairMachine {
    std::vector<std::size_t> members;  // indices into the training set, +1 side first
    std::size_t positives = 0;
    SmoSolution solution;

    [[nodiscard]] int label(std::size_t i) const { return i < positives ? 1 : -1; }
};

// Trains every class pair on a shared kernel over the whole training set.
// `warm`, when given, holds the machines of a smaller C on the same kernel.
std::vector<PairMachine> train_pairs(const SquareMatrix& kernel, const std::vector<std::vector<std::size_t>>& by_class,
                                     double C, const SmoOptions& options,
                                     const std::vector<PairMachine>* warm = nullptr) {
    const std::size_t k = by_class.size();
    std::vector<PairMachine> machines;
    machines.reserve(k * (k - 1) / 2);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b) {
            PairMachine m;
            m.members = by_class[a];
            m.positives = by_class[a].size();
            m.members.insert(m.members.end(), by_class[b].begin(), by_class[b].end());
            std::vector<int> y(m.members.size(), -1);
            std::fill_n(y.begin(), by_class[a].size(), 1);
            SquareMatrix sub(m.members.size());
            for (std::size_t i = 0; i < m.members.size(); ++i)
                for (std::size_t j = 0; j < m.members.size(); ++j) sub(i, j) = kernel(m.members[i], m.members[j]);
            const std::span<const double> start =
                warm ? std::span<const double>((*warm)[machines.size()].solution.alpha) : std::span<const double>();
            m.solution = solve_smo(sub, y, C, options, start);
            machines.push_back(std::move(m));
        }
    }
    return machines;
}

}  // namespace

void validate(const KernelParams& p) {
    if (!(p.C > 0.0) || !std::isfinite(p.C)) throw ParameterError("kernel params: C must be positive");
    if (!(p.gamma > 0.0) || !std::isfinite(p.gamma)) throw ParameterError("kernel params: gamma must be positive");
}

KernelParams default_params(FeatureType ft) {
    switch (ft) {
        case FeatureType::FT1: return {0.125, 0.001};
        case FeatureType::FT2: return {0.031, 0.0004};
        case FeatureType::FT3: return {0.001, 0.004};
    }
    return {1.0, 1.0};
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size()) throw ContractError("rbf_kernel: dimension mismatch");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    return std::exp(-gamma * d2);
}

SquareMatrix kernel_matrix(std::span<const FeatureVector> xs, double gamma) {
    SquareMatrix k(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        k(i, i) = 1.0;
        for (std::size_t j = i + 1; j < xs.size(); ++j) k(i, j) = k(j, i) = rbf_kernel(xs[i], xs[j], gamma);
    }
    return k;
}

SmoSolution solve_smo(const SquareMatrix& kernel, std::span<const int> y, double C, const SmoOptions& options,
                      std::span<const double> initial_alpha) {
    const std::size_t l = y.size();
    if (kernel.order() != l) throw ContractError("solve_smo: kernel size does not match labels");
    if (!(C > 0.0)) throw ParameterError("solve_smo: C must be positive");
    for (int label : y)
        if (label != 1 && label != -1) throw ContractError("solve_smo: labels must be +1 or -1");

    // Signed kernel Q(i, j) = y_i y_j K(i, j), row-major.
    std::vector<double> qm(l * l);
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) qm[i * l + j] = static_cast<double>(y[i] * y[j]) * kernel(i, j);
    auto qrow = [&](std::size_t i) { return qm.data() + i * l; };
    std::vector<double> yd(y.begin(), y.end());

    SmoSolution sol;
    sol.alpha.assign(l, 0.0);
    std::vector<double> grad(l, -1.0);
    auto& alpha = sol.alpha;
    if (!initial_alpha.empty()) {
        if (initial_alpha.size() != l) throw ContractError("solve_smo: initial alpha has the wrong length");
        for (std::size_t i = 0; i < l; ++i) {
            const double a = initial_alpha[i];
            if (!(a >= 0.0 && a <= C)) throw ContractError("solve_smo: initial alpha outside [0, C]");
            alpha[i] = a;
            if (a == 0.0) continue;
            const double* qi = qrow(i);
            for (std::size_t t = 0; t < l; ++t) grad[t] += qi[t] * a;
        }
    }
    const std::size_t max_iter = std::max<std::size_t>(1, options.max_passes) * std::max<std::size_t>(1, l);

    for (; sol.iterations < max_iter; ++sol.iterations) {
        double m_up = -std::numeric_limits<double>::infinity();
        double m_low = std::numeric_limits<double>::infinity();
        std::size_t i = l, j = l;
        for (std::size_t t = 0; t < l; ++t) {
            const double v = -yd[t] * grad[t];
            const bool pos = yd[t] > 0.0;
            const bool below = alpha[t] < C;
            const bool above = alpha[t] > 0.0;
            if ((pos ? below : above) && v > m_up) {
                m_up = v;
                i = t;
            }
            if ((pos ? above : below) && v < m_low) {
                m_low = v;
                j = t;
            }
        }
        if (i == l || j == l || m_up - m_low < options.tol) {
            sol.converged = true;
            break;
        }

        const double* qi = qrow(i);
        const double* qj = qrow(j);
        const double old_i = alpha[i];
        const double old_j = alpha[j];
        if (y[i] != y[j]) {
            double quad = qi[i] + qj[j] + 2.0 * qi[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if (diff > 0.0) {
                if (alpha[j] < 0.0) {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = C - diff;
                }
            } else if (alpha[j] > C) {
                alpha[j] = C;
                alpha[i] = C + diff;
            }
        } else {
            double quad = qi[i] + qj[j] - 2.0 * qi[j];
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if (sum > C) {
                if (alpha[i] > C) {
                    alpha[i] = C;
                    alpha[j] = sum - C;
                }
            } else if (alpha[j] < 0.0) {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if (sum > C) {
                if (alpha[j] > C) {
                    alpha[j] = C;
                    alpha[i] = sum - C;
                }
            } else if (alpha[i] < 0.0) {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        const double di = alpha[i] - old_i;
        const double dj = alpha[j] - old_j;
        double* g = grad.data();
        for (std::size_t t = 0; t < l; ++t) g[t] += qi[t] * di + qj[t] * dj;
    }

    // rho from free vectors, or the midpoint of the feasible interval.
    double ub = std::numeric_limits<double>::infinity();
    double lb = -std::numeric_limits<double>::infinity();
    double sum_free = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < l; ++t) {
        const double yg = y[t] * grad[t];
        if (alpha[t] >= C) {
            if (y[t] == -1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else if (alpha[t] <= 0.0) {
            if (y[t] == 1) ub = std::min(ub, yg);
            else lb = std::max(lb, yg);
        } else {
            ++free_count;
            sum_free += yg;
        }
    }
    double rho = 0.0;
    if (free_count > 0) rho = sum_free / static_cast<double>(free_count);
    else if (std::isfinite(ub) && std::isfinite(lb)) rho = (ub + lb) / 2.0;
    else if (std::isfinite(ub)) rho = ub;
    else if (std::isfinite(lb)) rho = lb;
    sol.bias = -rho;
    sol.objective = dual_objective(kernel, y, alpha);
    return sol;
}

double dual_objective(const SquareMatrix& kernel, std::span<const int> y, std::span<const double> alpha) {
    double linear = 0.0, quad = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        linear += alpha[i];
        if (alpha[i] == 0.0) continue;
        for (std::size_t j = 0; j < alpha.size(); ++j)
            quad += alpha[i] * alpha[j] * static_cast<double>(y[i] * y[j]) * kernel(i, j);
    }
    return linear - 0.5 * quad;
}

double max_kkt_violation(const SquareMatrix& kernel, std::span<const int> y, std::span<const double> alpha,
                         double bias, double C) {
    double worst = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        double f = bias;
        for (std::size_t j = 0; j < alpha.size(); ++j) f += alpha[j] * y[j] * kernel(j, i);
        const double margin = y[i] * f;
        double v = 0.0;
        if (alpha[i] <= 0.0) v = std::max(0.0, 1.0 - margin);
        else if (alpha[i] >= C) v = std::max(0.0, margin - 1.0);
        else v = std::abs(margin - 1.0);
        worst = std::max(worst, v);
    }
    return worst;
}

double BinarySvmModel::decision(std::span<const double> x) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
        f += coefficients[i] * rbf_kernel(support_vectors[i], x, params.gamma);
    return f;
}

BinarySvmModel train_binary(std::span<const FeatureVector> xs, std::span<const int> ys, const KernelParams& params,
                            const SmoOptions& options) {
    validate(params);
    if (xs.empty()) throw TrainingError("train_binary: no samples");
    if (xs.size() != ys.size()) throw ContractError("train_binary: samples and labels differ in length");
    check_dimensions(xs, "train_binary");
    const bool has_pos = std::find(ys.begin(), ys.end(), 1) != ys.end();
    const bool has_neg = std::find(ys.begin(), ys.end(), -1) != ys.end();
    if (!has_pos || !has_neg) throw TrainingError("train_binary: both +1 and -1 samples are required");

    const auto kernel = kernel_matrix(xs, params.gamma);
    const auto sol = solve_smo(kernel, ys, params.C, options);
    BinarySvmModel model;
    model.params = params;
    model.bias = sol.bias;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (sol.alpha[i] <= 0.0) continue;
        model.support_vectors.push_back(xs[i]);
        model.coefficients.push_back(sol.alpha[i] * ys[i]);
    }
    return model;
}

FeatureScaler FeatureScaler::fit(std::span<const FeatureVector> xs) {
    FeatureScaler s;
    if (xs.empty()) return s;
    const std::size_t d = xs.front().size();
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 0.0);
    for (const auto& x : xs)
        for (std::size_t k = 0; k < d; ++k) s.mean[k] += x[k];
    for (auto& m : s.mean) m /= static_cast<double>(xs.size());
    for (const auto& x : xs)
        for (std::size_t k = 0; k < d; ++k) s.scale[k] += (x[k] - s.mean[k]) * (x[k] - s.mean[k]);
    for (auto& v : s.scale) {
        v = std::sqrt(v / static_cast<double>(xs.size()));
        if (v <= 1e-12) v = 1.0;
    }
    return s;
}

FeatureVector FeatureScaler::apply(std::span<const double> x) const {
    if (x.size() != mean.size()) throw ContractError("FeatureScaler: dimension mismatch");
    FeatureVector out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) out[k] = (x[k] - mean[k]) / scale[k];
    return out;
}

std::size_t OvoModel::pair_index(std::size_t a, std::size_t b) const {
    const std::size_t k = classes.size();
    if (a == b || a >= k || b >= k) throw ContractError("OvoModel::pair_index: invalid pair");
    if (a > b) std::swap(a, b);
    // pairs before row a: sum_{r<a} (k-1-r)
    return a * (2 * k - a - 1) / 2 + (b - a - 1);
}

std::optional<std::size_t> OvoModel::class_index(int label) const {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) return std::nullopt;
    return static_cast<std::size_t>(it - classes.begin());
}

OvoModel train_ovo(std::span<const FeatureVector> xs, std::span<const int> ys, const KernelParams& params,
                   const OvoOptions& options) {
    validate(params);
    if (xs.size() != ys.size()) throw ContractError("train_ovo: samples and labels differ in length");
    check_dimensions(xs, "train_ovo");
    OvoModel model;
    model.classes = sorted_classes(ys);
    if (model.classes.size() < 2)
        throw TrainingError("train_ovo: at least two classes are required, got " +
                            std::to_string(model.classes.size()));
    model.feature_type = options.feature_type;
    model.dimension = xs.front().size();
    model.params = params;

    std::vector<FeatureVector> data(xs.begin(), xs.end());
    if (options.scale_features) {
        model.scaler = FeatureScaler::fit(data);
        for (auto& x : data) x = model.scaler->apply(x);
    }

    std::vector<std::vector<std::size_t>> by_class(model.classes.size());
    for (std::size_t i = 0; i < ys.size(); ++i) by_class[*model.class_index(ys[i])].push_back(i);

    const auto kernel = kernel_matrix(data, params.gamma);
    for (const auto& pm : train_pairs(kernel, by_class, params.C, options.smo)) {
        BinarySvmModel bin;
        bin.params = params;
        bin.bias = pm.solution.bias;
        for (std::size_t i = 0; i < pm.members.size(); ++i) {
            const double a = pm.solution.alpha[i];
            if (a <= 0.0) continue;
            bin.support_vectors.push_back(data[pm.members[i]]);
            bin.coefficients.push_back(a * pm.label(i));
        }
        model.binaries.push_back(std::move(bin));
    }
    return model;
}

std::size_t resolve_votes(std::span<const int> votes, std::span<const double> winning_margin) {
    std::size_t best = 0;
    for (std::size_t c = 1; c < votes.size(); ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && winning_margin[c] > winning_margin[best])) best = c;
    }
    return best;
}

OvoPrediction predict(const OvoModel& model, std::span<const double> x) {
    if (x.size() != model.dimension)
        throw ContractError("predict: feature length " + std::to_string(x.size()) + " does not match model length " +
                            std::to_string(model.dimension));
    const std::size_t k = model.classes.size();
    if (model.binaries.size() != k * (k - 1) / 2) throw ContractError("predict: model is missing pair machines");
    FeatureVector input(x.begin(), x.end());
    if (model.scaler) input = model.scaler->apply(input);

    OvoPrediction out;
    out.votes.assign(k, 0);
    std::vector<double> margin(k, 0.0);
    std::size_t p = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b, ++p) {
            const double f = model.binaries[p].decision(input);
            const std::size_t winner = f > 0.0 ? a : b;
            ++out.votes[winner];
            margin[winner] += std::abs(f);
        }
    }
    out.class_index = resolve_votes(out.votes, margin);
    out.label = model.classes[out.class_index];
    return out;
}

std::vector<double> default_grid(int base) {
    std::vector<double> grid;
    if (base == 10) {
        for (int k = -9; k <= 12; ++k) grid.push_back(std::pow(10.0, k / 3.0));
    } else if (base == 2) {
        for (int k = -10; k <= 13; ++k) grid.push_back(std::ldexp(1.0, k));
    } else {
        throw ParameterError("default_grid: base must be 2 or 10");
    }
    return grid;
}

GridSearchResult grid_search(const LabeledSet& train, const LabeledSet& val, std::span<const double> c_grid,
                             std::span<const double> gamma_grid, const GridSearchOptions& options) {
    if (c_grid.empty() || gamma_grid.empty()) throw ParameterError("grid_search: empty parameter grid");
    if (train.x.empty() || val.x.empty()) throw ParameterError("grid_search: empty training or validation set");
    if (train.x.size() != train.y.size() || val.x.size() != val.y.size())
        throw ContractError("grid_search: samples and labels differ in length");
    for (double c : c_grid) validate({c, 1.0});
    for (double g : gamma_grid) validate({1.0, g});
    check_dimensions(train.x, "grid_search");
    check_dimensions(val.x, "grid_search");
    if (train.x.front().size() != val.x.front().size())
        throw ContractError("grid_search: train and validation features differ in dimension");

    const auto classes = sorted_classes(train.y);
    if (classes.size() < 2) throw TrainingError("grid_search: at least two classes are required");
    auto index_of = [&](int label) {
        const auto it = std::lower_bound(classes.begin(), classes.end(), label);
        if (it == classes.end() || *it != label)
            throw DataError("grid_search: validation label " + std::to_string(label) + " is absent from training");
        return static_cast<std::size_t>(it - classes.begin());
    };
    const std::size_t k = classes.size();
    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < train.y.size(); ++i) by_class[index_of(train.y[i])].push_back(i);
    std::vector<std::size_t> val_actual(val.y.size());
    for (std::size_t i = 0; i < val.y.size(); ++i) val_actual[i] = index_of(val.y[i]);

    std::vector<FeatureVector> tx = train.x;
    std::vector<FeatureVector> vx = val.x;
    if (options.ovo.scale_features) {
        const auto scaler = FeatureScaler::fit(tx);
        for (auto& x : tx) x = scaler.apply(x);
        for (auto& x : vx) x = scaler.apply(x);
    }

    // Sort both axes so ties resolve to the smaller C, then the smaller gamma,
    // and so each gamma row can warm-start from the previous C.
    std::vector<std::size_t> c_order(c_grid.size()), g_order(gamma_grid.size());
    for (std::size_t i = 0; i < c_order.size(); ++i) c_order[i] = i;
    for (std::size_t i = 0; i < g_order.size(); ++i) g_order[i] = i;
    std::stable_sort(c_order.begin(), c_order.end(), [&](auto a, auto b) { return c_grid[a] < c_grid[b]; });
    std::stable_sort(g_order.begin(), g_order.end(), [&](auto a, auto b) { return gamma_grid[a] < gamma_grid[b]; });

    // scores[g * |C| + c]
    std::vector<double> scores(gamma_grid.size() * c_grid.size(), 0.0);
    parallel_for(gamma_grid.size(), options.threads, [&](std::size_t g) {
        const double gamma = gamma_grid[g];
        const auto kernel = kernel_matrix(tx, gamma);
        std::vector<double> cross(vx.size() * tx.size());
        for (std::size_t v = 0; v < vx.size(); ++v)
            for (std::size_t t = 0; t < tx.size(); ++t) cross[v * tx.size() + t] = rbf_kernel(vx[v], tx[t], gamma);

        std::vector<PairMachine> machines;
        for (std::size_t c : c_order) {
            machines = train_pairs(kernel, by_class, c_grid[c], options.ovo.smo, machines.empty() ? nullptr : &machines);
            std::vector<std::size_t> predicted(vx.size());
            std::vector<int> votes(k);
            std::vector<double> margin(k);
            for (std::size_t v = 0; v < vx.size(); ++v) {
                std::fill(votes.begin(), votes.end(), 0);
                std::fill(margin.begin(), margin.end(), 0.0);
                const double* row = &cross[v * tx.size()];
                std::size_t p = 0;
                for (std::size_t a = 0; a < k; ++a) {
                    for (std::size_t b = a + 1; b < k; ++b, ++p) {
                        const auto& m = machines[p];
                        double f = m.solution.bias;
                        for (std::size_t i = 0; i < m.members.size(); ++i) {
                            const double alpha = m.solution.alpha[i];
                            if (alpha > 0.0) f += alpha * m.label(i) * row[m.members[i]];
                        }
                        const std::size_t winner = f > 0.0 ? a : b;
                        ++votes[winner];
                        margin[winner] += std::abs(f);
                    }
                }
                predicted[v] = resolve_votes(votes, margin);
            }
            scores[g * c_grid.size() + c] = precision_recall_f(confusion_matrix(val_actual, predicted, k)).macro_f;
        }
    });

    GridSearchResult best{{c_grid[c_order.front()], gamma_grid[g_order.front()]}, -1.0};
    for (auto c : c_order) {
        for (auto g : g_order) {
            const double s = scores[g * c_grid.size() + c];
            if (s > best.score) best = {{c_grid[c], gamma_grid[g]}, s};
        }
    }
    return best;
}

}  // namespace specgraph
