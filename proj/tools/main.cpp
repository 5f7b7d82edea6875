#include <cstddef>
#include <cstdint>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "olsattn/errors.hpp"
#include "olsattn/experiments.hpp"
#include "olsattn/serialize.hpp"
#include "olsattn/trainer.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

constexpr double kEquivRelTol = 1e-8;

struct GridRange {
    double lo = 0.5;
    double hi = 2.0;
    double step = 0.25;
};

GridRange parse_grid(const std::string& text) {
    GridRange g;
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos) {
        throw olsattn::dimension_error("grid must be lo:hi:step, got '" + text + "'");
    }
    try {
        std::size_t used = 0;
        g.lo = std::stod(text.substr(0, first), &used);
        g.hi = std::stod(text.substr(first + 1, second - first - 1), &used);
        g.step = std::stod(text.substr(second + 1), &used);
    } catch (const std::exception&) {
        throw olsattn::dimension_error("grid must be lo:hi:step with numeric fields, got '" + text + "'");
    }
    return g;
}

std::string resolve_out(const std::string& out, const std::string& command, const std::string& format) {
    if (!out.empty()) return out;
    return command + "." + format;
}

int run_equiv(const olsattn::EquivSweepConfig& config, const std::string& out_path, const std::string& format) {
    std::vector<olsattn::EquivTrial> rows = olsattn::equivalence_sweep(config);

    double max_rel = 0.0;
    double max_abs = 0.0;
    double max_resid = 0.0;
    for (const olsattn::EquivTrial& r : rows) {
        max_rel = std::max(max_rel, r.report.rel_frobenius_diff);
        max_abs = std::max(max_abs, r.report.max_abs_diff);
        max_resid = std::max(max_resid, r.report.whitening_residual);
    }

    const std::string content =
        format == "json" ? olsattn::equiv_to_json(rows, config) : olsattn::equiv_to_csv(rows, config);
    olsattn::write_file(out_path, content);

    std::cout << "trials: " << rows.size() << "\n"
              << "max_rel_frobenius_diff: " << olsattn::format_double(max_rel) << "\n"
              << "max_abs_diff: " << olsattn::format_double(max_abs) << "\n"
              << "max_whitening_residual: " << olsattn::format_double(max_resid) << "\n"
              << "wrote: " << out_path << "\n";

    if (max_rel > kEquivRelTol) {
        std::cerr << "equivalence failure: max relative difference " << olsattn::format_double(max_rel)
                  << " exceeds " << olsattn::format_double(kEquivRelTol) << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int run_train(const olsattn::TrainConfig& config, const std::string& out_path, const std::string& format) {
    olsattn::TrainingTrace trace = olsattn::train(config);

    const std::string content =
        format == "json" ? olsattn::trace_to_json(trace) : olsattn::trace_to_csv(trace);
    olsattn::write_file(out_path, content);

    const olsattn::TraceRecord& last = trace.records.back();
    const double rel_l = std::abs(last.l_value - trace.l_star) / trace.l_star;
    const auto structural =
        olsattn::first_crossing_epoch(trace, 1e-2, olsattn::ConvergenceMetric::structural);
    const auto functional =
        olsattn::first_crossing_epoch(trace, 1e-2, olsattn::ConvergenceMetric::functional);

    if (trace.near_zero_stall_epoch) {
        std::cerr << "warning: |l| stalled near zero from epoch " << *trace.near_zero_stall_epoch
                  << " (flat point of the loss); consider a different l0\n";
    }

    auto epoch_or_dash = [](const std::optional<std::size_t>& e) {
        return e ? std::to_string(*e) : std::string("-");
    };
    std::cout << "l_star: " << olsattn::format_double(trace.l_star) << "\n"
              << "final_mse: " << olsattn::format_double(last.mse) << "\n"
              << "final_rel_l_error: " << olsattn::format_double(rel_l) << "\n"
              << "final_rel_dist_to_ols: " << olsattn::format_double(last.rel_dist_to_ols) << "\n"
              << "first_epoch_structural_1e-2: " << epoch_or_dash(structural) << "\n"
              << "first_epoch_functional_1e-2: " << epoch_or_dash(functional) << "\n"
              << "wrote: " << out_path << "\n";
    return kExitOk;
}

int run_shift(const olsattn::ShiftSweepConfig& config, const std::string& out_path, const std::string& format) {
    std::vector<olsattn::ShiftSweepRow> rows = olsattn::shift_sweep(config);

    const std::string content =
        format == "json" ? olsattn::shift_to_json(rows, config) : olsattn::shift_to_csv(rows, config);
    olsattn::write_file(out_path, content);

    std::cout << "rows: " << rows.size() << "\n"
              << "wrote: " << out_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "ols-attention: least-squares regression as a single-layer linear-attention network.\n"
        "Subcommands: equiv (construction vs closed form), train (scalar training run),\n"
        "shift (context-covariance sweeps). Identical command line + seed gives\n"
        "byte-identical output files."};
    app.require_subcommand(1);

    std::string out_path;
    std::string format = "csv";

    // equiv
    auto* equiv = app.add_subcommand(
        "equiv", "Check the attention forward pass against the closed-form fit on random instances");
    olsattn::EquivSweepConfig eq;
    equiv->add_option("--trials", eq.trials, "Number of random instances")
        ->default_val(std::size_t{100})
        ->check(CLI::PositiveNumber);
    equiv->add_option("--n", eq.max_n, "Largest sample count per trial")
        ->default_val(std::size_t{200})
        ->check(CLI::PositiveNumber);
    equiv->add_option("--k", eq.max_k, "Largest feature count per trial")
        ->default_val(std::size_t{8})
        ->check(CLI::PositiveNumber);
    equiv->add_option("--seed", eq.seed, "Base seed; trial t uses a seed derived from (seed, t)")
        ->default_val(std::uint64_t{7});
    equiv->add_flag("--debug-scores", eq.debug_scores,
                    "Also run the n x n score-matrix route and cross-check the two association orders");

    // train
    auto* train = app.add_subcommand(
        "train", "Train the scalar model with Adam; defaults reproduce the 1-D reference run "
                 "(n=500, slope=2, noise_var=1e-4, l0=0.5, 5000 epochs)");
    olsattn::TrainConfig tr;
    std::string dist_name = "uniform";
    train->add_option("--n", tr.n, "Sample count")->default_val(std::size_t{500})->check(CLI::PositiveNumber);
    train->add_option("--slope", tr.slope, "Ground-truth slope")->default_val(2.0);
    train->add_option("--noise-var", tr.noise_var, "Gaussian noise variance on y")
        ->default_val(1e-4)
        ->check(CLI::NonNegativeNumber);
    train->add_option("--l0", tr.l0, "Initial value of the scalar parameter")->default_val(0.5);
    train->add_option("--epochs", tr.epochs, "Full-batch epochs")
        ->default_val(std::size_t{5000})
        ->check(CLI::PositiveNumber);
    train->add_option("--lr", tr.lr, "Adam learning rate (reference runs use 0.01; not a reported value)")
        ->default_val(0.01)
        ->check(CLI::PositiveNumber);
    train->add_option("--seed", tr.seed, "Dataset seed")->default_val(std::uint64_t{1});
    train
        ->add_option("--dist", dist_name,
                     "Input distribution: uniform on [-1,1] (artifact default) or standard gaussian")
        ->default_val(std::string{"uniform"})
        ->check(CLI::IsMember({"uniform", "gaussian"}));
    train->add_option("--record-every", tr.record_every, "Record every r-th epoch (final epoch always kept)")
        ->default_val(std::size_t{1})
        ->check(CLI::PositiveNumber);

    // shift
    auto* shift = app.add_subcommand(
        "shift", "Sweep a context-covariance shift against a fixed training set. Training inputs are "
                 "recolored to an exactly isotropic covariance, so rotations are a no-op and the scale "
                 "kind (which multiplies Z entries by the parameter, hence covariance by its square) has "
                 "relative error |param^2 - 1| exactly");
    olsattn::ShiftSweepConfig sh;
    std::string kind_name = "scale";
    std::string grid_text = "0.5:2.0:0.25";
    shift->add_option("--n", sh.n, "Training sample count")
        ->default_val(std::size_t{500})
        ->check(CLI::PositiveNumber);
    shift->add_option("--k", sh.k, "Feature count")->default_val(std::size_t{3})->check(CLI::PositiveNumber);
    shift->add_option("--m", sh.m, "Context sample count (0 means n)")->default_val(std::size_t{0});
    shift->add_option("--seed", sh.seed, "Base seed for training data and context draws")
        ->default_val(std::uint64_t{1});
    shift
        ->add_option("--shift-kind", kind_name,
                     "scale: multiply Z entries by param; rotate: rotate Z by param radians in the first "
                     "coordinate plane; anisotropic: multiply the first coordinate by param")
        ->default_val(std::string{"scale"})
        ->check(CLI::IsMember({"scale", "rotate", "anisotropic"}));
    shift->add_option("--grid", grid_text, "Parameter grid lo:hi:step (inclusive)")
        ->default_val(std::string{"0.5:2.0:0.25"});

    for (CLI::App* sub : {equiv, train, shift}) {
        sub->add_option("--out", out_path, "Output file (default: <command>.<format>)");
        sub->add_option("--format", format, "Output format")
            ->default_val(std::string{"csv"})
            ->check(CLI::IsMember({"csv", "json"}));
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (app.got_subcommand(equiv)) {
            return run_equiv(eq, resolve_out(out_path, "equiv", format), format);
        }
        if (app.got_subcommand(train)) {
            tr.dist = dist_name == "gaussian" ? olsattn::InputDistribution::gaussian
                                              : olsattn::InputDistribution::uniform;
            return run_train(tr, resolve_out(out_path, "train", format), format);
        }
        if (app.got_subcommand(shift)) {
            if (kind_name == "rotate") {
                sh.kind = olsattn::ShiftSpec::Kind::rotate;
            } else if (kind_name == "anisotropic") {
                sh.kind = olsattn::ShiftSpec::Kind::anisotropic;
            } else {
                sh.kind = olsattn::ShiftSpec::Kind::scale;
            }
            const GridRange g = parse_grid(grid_text);
            sh.grid_lo = g.lo;
            sh.grid_hi = g.hi;
            sh.grid_step = g.step;
            return run_shift(sh, resolve_out(out_path, "shift", format), format);
        }
    } catch (const olsattn::dimension_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const olsattn::rank_deficient_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const olsattn::numerical_error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitUsage;
}
