// qlangevin: command line front end for the repeated-interaction heat bath library.
//
// Subcommands:
//   coeffs      rescaled interaction coefficients and their small-step limits
//   converge    discrete dynamics vs the Lindblad semigroup at fixed horizon
//   evolve      populations, coherences and distance to the stationary state
//   thermalize  stationarity, uniqueness and return-to-equilibrium report
//   oracle      chain contraction vs iterated one-step map
//   ito-check   quantum Ito table and unitarity verdicts
//   spectrum    generator eigenvalues
//
// Exit codes: 0 success, 2 invalid input, 3 tolerance failure or numeric
// breakdown, 4 resource limit.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qlv/chain.hpp"
#include "qlv/dynamics.hpp"
#include "qlv/errors.hpp"
#include "qlv/gns.hpp"
#include "qlv/model.hpp"
#include "qlv/model_io.hpp"
#include "qlv/noise.hpp"
#include "qlv/numkit.hpp"
#include "qlv/rng.hpp"

namespace {

using qlv::CMatrix;
using qlv::Complex;

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

std::string fmt_int(long long n) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%lld", n);
    return std::string(buf);
}

// RFC 4180 style writer: CRLF line endings, one header row, every row padded
// to the header width. Scalar summaries go in labelled footer rows.
struct CsvWriter {
    std::ofstream out;
    std::size_t width = 0;

    CsvWriter(const std::string& path, const std::vector<std::string>& header) {
        out.open(path, std::ios::binary);
        if (!out) throw qlv::validation_error("cannot open output file " + path);
        width = header.size();
        row(header);
    }

    void row(const std::vector<std::string>& fields) {
        if (fields.size() > width)
            throw qlv::validation_error("csv row wider than header");
        for (std::size_t i = 0; i < width; ++i) {
            if (i) out << ',';
            if (i < fields.size()) out << fields[i];
        }
        out << "\r\n";
    }

    void footer(const std::string& label, const std::string& value) {
        row({label, value});
    }
};

void write_json(const std::string& path, const nlohmann::json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw qlv::validation_error("cannot open output file " + path);
    out << j.dump(2) << "\n";
}

CMatrix random_density(qlv::Rng& rng, int d) {
    CMatrix a(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c)
            a(r, c) = Complex(rng.normal(), rng.normal());
    CMatrix rho = a * a.adjoint();
    rho /= rho.trace();
    return rho;
}

struct CommonArgs {
    std::string model_path;
    std::string out_path;
    std::uint64_t seed = 12345;
};

void attach_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--model", args.model_path, "model description (json)")->required();
    cmd->add_option("--out", args.out_path, "output file")->required();
    cmd->add_option("--seed", args.seed, "seed for generated states");
}

// ---------------------------------------------------------------- coeffs ---

int run_coeffs(const CommonArgs& args, std::vector<double> taus, double tol) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    if (taus.empty())
        for (int p = 8; p <= 14; ++p) taus.push_back(std::pow(2.0, -p));
    std::sort(taus.begin(), taus.end(), std::greater<double>());

    qlv::EmpiricalLimits emp = qlv::empirical_limits(model, taus);
    const int n = model.bath.N + 1;

    CsvWriter csv(args.out_path,
                  {"i", "j", "k", "l", "epsilon", "residual_at_smallest_tau",
                   "fitted_order", "richardson_residual"});
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    const qlv::LimitEstimate& e = emp.at(i, j, k, l);
                    worst = std::max(worst, e.residual);
                    csv.row({fmt_int(i), fmt_int(j), fmt_int(k), fmt_int(l),
                             fmt17(qlv::scaling_exponent(i, j, k, l)),
                             fmt17(e.residual), fmt17(e.fitted_order),
                             fmt17(e.richardson_residual)});
                }
    csv.footer("max_residual", fmt17(worst));
    csv.footer("tau_min", fmt17(taus.back()));
    csv.footer("tol", fmt17(tol));
    return worst <= tol ? 0 : 3;
}

// -------------------------------------------------------------- converge ---

int run_converge(const CommonArgs& args, double t, std::vector<double> taus,
                 double min_slope) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    if (taus.empty()) taus = {0.02, 0.01, 0.005, 0.0025};
    std::sort(taus.begin(), taus.end(), std::greater<double>());

    qlv::Rng rng(args.seed);
    CMatrix rho0 = random_density(rng, model.system.d);
    qlv::ConvergenceStudy study = qlv::convergence_study(model, rho0, t, taus);

    CsvWriter csv(args.out_path, {"tau", "n_steps", "trace_distance"});
    for (const qlv::ConvergenceRow& r : study.rows)
        csv.row({fmt17(r.tau), fmt_int(r.n_steps), fmt17(r.trace_distance)});
    csv.footer("slope", fmt17(study.slope));
    csv.footer("min_slope", fmt17(min_slope));
    csv.footer("t", fmt17(t));
    csv.footer("seed", fmt_int(static_cast<long long>(args.seed)));
    csv.footer("generator", qlv::Rng::name());
    return study.slope >= min_slope ? 0 : 3;
}

// ---------------------------------------------------------------- evolve ---

int run_evolve(const CommonArgs& args, double t_max, int points) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    if (t_max <= 0.0) throw qlv::validation_error("evolve needs --t > 0");
    if (points < 1) throw qlv::validation_error("evolve needs --points >= 1");
    const int d = model.system.d;

    qlv::Superoperator gen = qlv::lindblad_schrodinger(model);
    qlv::StationaryStates st = qlv::stationary_states(gen);
    if (st.null_dim != 1 || st.states.size() != 1)
        throw qlv::validation_error(
            "evolve needs a unique stationary state, kernel dimension is " +
            std::to_string(st.null_dim));
    const CMatrix& target = st.states[0];

    qlv::Rng rng(args.seed);
    CMatrix rho0 = random_density(rng, d);

    std::vector<std::string> header = {"t"};
    for (int p = 0; p < d; ++p) header.push_back("pop_" + std::to_string(p));
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            header.push_back("coh_re_" + std::to_string(i) + "_" + std::to_string(j));
            header.push_back("coh_im_" + std::to_string(i) + "_" + std::to_string(j));
        }
    header.push_back("trace_distance_to_stationary");

    CsvWriter csv(args.out_path, header);
    for (int step = 0; step <= points; ++step) {
        double t = t_max * double(step) / double(points);
        CMatrix rho = (step == 0) ? rho0 : qlv::evolve(gen, rho0, t);
        std::vector<std::string> row = {fmt17(t)};
        for (int p = 0; p < d; ++p) row.push_back(fmt17(rho(p, p).real()));
        for (int i = 0; i < d; ++i)
            for (int j = i + 1; j < d; ++j) {
                row.push_back(fmt17(rho(i, j).real()));
                row.push_back(fmt17(rho(i, j).imag()));
            }
        row.push_back(fmt17(0.5 * qlv::trace_norm(rho - target)));
        csv.row(row);
    }
    csv.footer("seed", fmt_int(static_cast<long long>(args.seed)));
    csv.footer("generator", qlv::Rng::name());
    return 0;
}

// ------------------------------------------------------------ thermalize ---

int run_thermalize(const CommonArgs& args, double tol) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    const int d = model.system.d;
    if (model.bath.N + 1 != d)
        throw qlv::validation_error(
            "thermalize needs one bath level per system level");

    qlv::Superoperator gen = qlv::lindblad_schrodinger(model);

    CMatrix gibbs = CMatrix::Zero(d, d);
    for (int p = 0; p < d; ++p) gibbs(p, p) = model.bath.weights[p];
    double invariant_residual = qlv::max_abs(gen.apply(gibbs));

    qlv::StationaryStates st = qlv::stationary_states(gen);
    double stationary_match = -1.0;
    if (st.states.size() == 1)
        stationary_match = qlv::max_abs(st.states[0] - gibbs);

    qlv::ThermalForm tf = qlv::thermal_couplings(model);
    std::vector<CMatrix> with_h = tf.W;
    for (const CMatrix& w : tf.W) with_h.push_back(w.adjoint());
    std::vector<CMatrix> without_h = with_h;
    with_h.push_back(model.system.H_S);
    int dim_with = qlv::commutant_dim(with_h);
    int dim_without = qlv::commutant_dim(without_h);

    double gap = qlv::spectral_gap(gen);
    if (gap <= 0.0) throw qlv::numeric_error("generator has no spectral gap");

    nlohmann::json j;
    j["invariant_residual"] = invariant_residual;
    j["stationary_count"] = st.null_dim;
    j["stationary_match"] = stationary_match;
    j["commutant_dim_with_H"] = dim_with;
    j["commutant_dim_without_H"] = dim_without;
    j["spectral_gap"] = gap;
    j["tol"] = tol;
    j["seed"] = args.seed;
    j["generator"] = qlv::Rng::name();

    // The fit needs a unique target; report null fields when there is none.
    if (st.null_dim == 1) {
        std::vector<double> grid;
        for (int k = 0; k <= 24; ++k) grid.push_back(double(k) / gap);
        qlv::Rng rng(args.seed);
        CMatrix rho0 = random_density(rng, d);
        qlv::EquilibriumStudy eq = qlv::return_to_equilibrium(model, rho0, grid);
        j["fitted_rate"] = eq.rate;
        j["fit_points"] = eq.fit_points;
        j["final_distance"] = eq.rows[20].trace_distance;
        j["final_time"] = grid[20];
    } else {
        j["fitted_rate"] = nullptr;
        j["fit_points"] = 0;
        j["final_distance"] = nullptr;
        j["final_time"] = nullptr;
    }
    write_json(args.out_path, j);

    bool ok = invariant_residual <= tol && st.null_dim == 1 &&
              dim_with == dim_without;
    return ok ? 0 : 3;
}

// ---------------------------------------------------------------- oracle ---

int run_oracle(const CommonArgs& args, int k, double tau, double tol) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    if (k < 0) throw qlv::validation_error("oracle needs --k >= 0");
    if (tau <= 0.0) throw qlv::validation_error("oracle needs --tau > 0");

    // Refuse oversized chains up front: a bad size is an input problem.
    const int levels = model.bath.N + 1;
    double dim = model.system.d;
    for (int s = 0; s < k; ++s) {
        dim *= levels;
        if (dim > 65536.0)
            throw qlv::validation_error(
                "chain dimension exceeds 65536, reduce --k");
    }

    qlv::Rng rng(args.seed);
    CMatrix rho0 = random_density(rng, model.system.d);
    qlv::Superoperator phi = qlv::interaction_map(model, tau);

    double worst = 0.0;
    CMatrix iterated = rho0;
    for (int step = 1; step <= k; ++step) {
        iterated = phi.apply(iterated);
        CMatrix direct = qlv::reduced_state_after(model, tau, rho0, step);
        worst = std::max(worst, qlv::max_abs(direct - iterated));
    }

    nlohmann::json j;
    j["k"] = k;
    j["tau"] = tau;
    j["dimension"] = static_cast<long long>(dim);
    j["max_deviation"] = worst;
    j["tol"] = tol;
    j["seed"] = args.seed;
    j["generator"] = qlv::Rng::name();
    write_json(args.out_path, j);
    return worst <= tol ? 0 : 3;
}

// -------------------------------------------------------------- ito-check ---

int run_ito_check(const CommonArgs& args, double tol) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    if (!model.bath.beta)
        throw qlv::validation_error("ito-check needs a gibbs bath state");
    qlv::require_nondegenerate(model.bath);

    const int n = model.bath.N;
    qlv::ThermalRatios ratios = qlv::ThermalRatios::from_weights(model.bath.weights);

    CsvWriter csv(args.out_path,
                  {"channel", "r_plus", "r_minus", "factor", "coth_residual"});
    double worst_coth = 0.0;
    for (int i = 1; i <= n; ++i) {
        double factor = ratios.r_plus[i - 1] + ratios.r_minus[i - 1];
        double coth =
            1.0 / std::tanh(0.5 * *model.bath.beta *
                            (model.bath.gamma[i] - model.bath.gamma[0]));
        double res = std::abs(factor - coth);
        worst_coth = std::max(worst_coth, res);
        csv.row({fmt_int(i), fmt17(ratios.r_plus[i - 1]),
                 fmt17(ratios.r_minus[i - 1]), fmt17(factor), fmt17(res)});
    }

    // Unitarity of the thermal coefficient table built from the model itself.
    qlv::ThermalForm tf = qlv::thermal_couplings(model);
    qlv::ThermalCoeffs tc;
    tc.Kplus = tf.W;
    tc.Kminus.clear();
    for (const CMatrix& w : tf.W) tc.Kminus.push_back(CMatrix(-w.adjoint()));
    const int d = model.system.d;
    CMatrix k00 = Complex(0, -1) * model.system.H_S;
    for (int i = 0; i < n; ++i) {
        k00 -= 0.5 * ratios.r_plus[i] * (tf.W[i].adjoint() * tf.W[i]);
        k00 -= 0.5 * ratios.r_minus[i] * (tf.W[i] * tf.W[i].adjoint());
    }
    tc.K00 = k00;
    qlv::UnitarityReport thermal = qlv::thermal_unitarity(tc, ratios);

    // Same couplings at zero temperature against the Fock-side criterion.
    qlv::NoiseCoeffs hp = qlv::NoiseCoeffs::zeros(n, d);
    CMatrix h00 = Complex(0, -1) * model.system.H_S;
    for (int i = 0; i < n; ++i) {
        hp.at(0, i + 1) = tf.W[i];
        hp.at(i + 1, 0) = CMatrix(-tf.W[i].adjoint());
        h00 -= 0.5 * (tf.W[i].adjoint() * tf.W[i]);
    }
    hp.at(0, 0) = h00;
    qlv::UnitarityReport fock = qlv::hp_unitarity(hp);

    double left = qlv::qsde_defect_left(tc, ratios).max_coeff();
    double right = qlv::qsde_defect_right(tc, ratios).max_coeff();

    // Canonical commutation pairing on random amplitudes.
    qlv::Rng rng(args.seed);
    double worst_ccr = 0.0;
    for (int draw = 0; draw < 100; ++draw) {
        std::vector<double> fn(n);
        std::vector<Complex> gi(n);
        Complex want(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            fn[i] = rng.uniform();
            gi[i] = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
            want += gi[i];
        }
        worst_ccr = std::max(worst_ccr, std::abs(qlv::ccr_check(fn, gi, ratios) - want));
    }

    csv.footer("thermal_unitarity_ok", thermal.ok ? "1" : "0");
    csv.footer("fock_unitarity_ok", fock.ok ? "1" : "0");
    csv.footer("qsde_left_defect", fmt17(left));
    csv.footer("qsde_right_defect", fmt17(right));
    csv.footer("ccr_max_residual", fmt17(worst_ccr));
    csv.footer("max_coth_residual", fmt17(worst_coth));
    csv.footer("tol", fmt17(tol));
    csv.footer("seed", fmt_int(static_cast<long long>(args.seed)));
    csv.footer("generator", qlv::Rng::name());

    bool ok = thermal.ok && fock.ok && worst_coth <= tol && left <= tol &&
              right <= tol && worst_ccr <= 1e-15;
    return ok ? 0 : 3;
}

// -------------------------------------------------------------- spectrum ---

int run_spectrum(const CommonArgs& args) {
    qlv::ModelSpec model = qlv::load_model(args.model_path);
    qlv::Superoperator gen = qlv::lindblad_schrodinger(model);

    Eigen::ComplexEigenSolver<CMatrix> solver(gen.M);
    if (solver.info() != Eigen::Success)
        throw qlv::numeric_error("eigensolver failed on the generator");
    std::vector<Complex> eigs(solver.eigenvalues().data(),
                              solver.eigenvalues().data() +
                                  solver.eigenvalues().size());
    std::sort(eigs.begin(), eigs.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });

    double scale = std::max(1.0, qlv::max_abs(gen.M));
    double zero_defect = std::abs(eigs.front());
    double max_real = eigs.front().real();
    for (Complex mu : eigs) {
        zero_defect = std::min(zero_defect, std::abs(mu));
        max_real = std::max(max_real, mu.real());
    }

    CsvWriter csv(args.out_path, {"index", "re", "im"});
    int idx = 0;
    for (Complex mu : eigs)
        csv.row({fmt_int(idx++), fmt17(mu.real()), fmt17(mu.imag())});
    csv.footer("spectral_gap", fmt17(qlv::spectral_gap(gen)));
    csv.footer("max_real", fmt17(max_real));
    csv.footer("zero_defect", fmt17(zero_defect));

    bool ok = zero_defect <= 1e-9 * scale && max_real <= 1e-9 * scale;
    return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repeated quantum interaction heat bath toolkit"};
    app.require_subcommand(1);

    CommonArgs coeffs_args, converge_args, evolve_args, thermalize_args;
    CommonArgs oracle_args, ito_args, spectrum_args;

    std::vector<double> coeffs_taus;
    double coeffs_tol = 5e-3;
    CLI::App* coeffs = app.add_subcommand("coeffs", "rescaled coefficient limits");
    attach_common(coeffs, coeffs_args);
    coeffs->add_option("--taus", coeffs_taus, "step sizes, descending");
    coeffs->add_option("--tol", coeffs_tol, "residual gate");

    double converge_t = 1.0, converge_min_slope = 0.7;
    std::vector<double> converge_taus;
    CLI::App* converge = app.add_subcommand("converge", "semigroup convergence");
    attach_common(converge, converge_args);
    converge->add_option("--t", converge_t, "horizon");
    converge->add_option("--taus", converge_taus, "step sizes, descending");
    converge->add_option("--min-slope", converge_min_slope, "slope gate");

    double evolve_t = 10.0;
    int evolve_points = 60;
    CLI::App* evolve = app.add_subcommand("evolve", "trajectory table");
    attach_common(evolve, evolve_args);
    evolve->add_option("--t", evolve_t, "horizon");
    evolve->add_option("--points", evolve_points, "grid intervals");

    double thermalize_tol = 1e-10;
    CLI::App* thermalize = app.add_subcommand("thermalize", "equilibrium report");
    attach_common(thermalize, thermalize_args);
    thermalize->add_option("--tol", thermalize_tol, "invariance gate");

    int oracle_k = 4;
    double oracle_tau = 0.1, oracle_tol = 1e-10;
    CLI::App* oracle = app.add_subcommand("oracle", "chain contraction check");
    attach_common(oracle, oracle_args);
    oracle->add_option("--k", oracle_k, "chain length");
    oracle->add_option("--tau", oracle_tau, "step size");
    oracle->add_option("--tol", oracle_tol, "deviation gate");

    double ito_tol = 1e-12;
    CLI::App* ito = app.add_subcommand("ito-check", "ito table and unitarity");
    attach_common(ito, ito_args);
    ito->add_option("--tol", ito_tol, "residual gate");

    CLI::App* spectrum = app.add_subcommand("spectrum", "generator eigenvalues");
    attach_common(spectrum, spectrum_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (coeffs->parsed()) return run_coeffs(coeffs_args, coeffs_taus, coeffs_tol);
        if (converge->parsed())
            return run_converge(converge_args, converge_t, converge_taus,
                                converge_min_slope);
        if (evolve->parsed()) return run_evolve(evolve_args, evolve_t, evolve_points);
        if (thermalize->parsed()) return run_thermalize(thermalize_args, thermalize_tol);
        if (oracle->parsed())
            return run_oracle(oracle_args, oracle_k, oracle_tau, oracle_tol);
        if (ito->parsed()) return run_ito_check(ito_args, ito_tol);
        if (spectrum->parsed()) return run_spectrum(spectrum_args);
    } catch (const qlv::validation_error& e) {
        std::fprintf(stderr, "qlangevin: %s\n", e.what());
        return 2;
    } catch (const qlv::resource_error& e) {
        std::fprintf(stderr, "qlangevin: %s\n", e.what());
        return 4;
    } catch (const qlv::numeric_error& e) {
        std::fprintf(stderr, "qlangevin: %s\n", e.what());
        return 3;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "qlangevin: out of memory\n");
        return 4;
    }
    return 2;
}
