#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "slicefourier/classify.hpp"
#include "slicefourier/error.hpp"
#include "slicefourier/expansion.hpp"
#include "slicefourier/io.hpp"
#include "slicefourier/kaczmarz.hpp"
#include "slicefourier/moments.hpp"
#include "slicefourier/transforms.hpp"
#include "slicefourier/verify.hpp"

using namespace slicefourier;

namespace {

struct RunConfig {
    std::string config;
    std::string out;
    std::string fspec;
    std::string orders;
    std::string quad = "prefix:12";
    std::string verify_quad = "prefix:8";
    std::string grid = "0.5,8";
    std::string suite = "all";
    std::string format = "json";
    std::uint64_t seed = 0;
    int nmax = 8;
    int coordinate = 0;
    int threads = 1;
    bool table = false;
};

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');) parts.push_back(item);
    return parts;
}

std::vector<int> parse_orders(const std::string& text, int dim) {
    if (text.empty()) fail(ErrorCode::InvalidArgument, "--orders is required");
    std::vector<int> orders;
    for (const auto& p : split(text)) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(p, &used);
            if (used != p.size() || v < 0) throw std::invalid_argument(p);
            orders.push_back(v);
        } catch (const std::exception&) {
            fail(ErrorCode::InvalidArgument, "bad order '" + p + "'");
        }
    }
    if (orders.size() == 1 && dim > 1) orders.assign(dim, orders[0]);
    if (static_cast<int>(orders.size()) != dim)
        fail(ErrorCode::InvalidArgument, "--orders needs " + std::to_string(dim) + " entries");
    return orders;
}

void emit(const RunConfig& rc, const std::string& text) {
    if (rc.out.empty())
        std::cout << text;
    else
        write_file(rc.out, text);
}

void summary(const RunConfig& rc, const Json& j) { (rc.out.empty() ? std::cerr : std::cout) << j.dump() << '\n'; }

Measure load(const RunConfig& rc) {
    if (rc.config.empty()) fail(ErrorCode::InvalidArgument, "--config is required");
    return load_measure(rc.config);
}

TrigPoly load_f(const RunConfig& rc, int dim) {
    return rc.fspec.empty() ? TrigPoly::constant(dim) : load_trig_poly(rc.fspec, dim);
}

void cmd_moments(const RunConfig& rc) {
    const Measure m = load(rc);
    const int d = dimension(m);
    if (rc.nmax < 0) fail(ErrorCode::InvalidArgument, "--nmax must be >= 0");
    if (std::pow(2.0 * rc.nmax + 1.0, d) > 1e7) fail(ErrorCode::InvalidArgument, "moment box too large");
    std::ostringstream out;
    for (int c = 0; c < d; ++c) out << 'n' << c << ',';
    out << "re,im,error\n";
    const Shape sh(std::vector<int>(d, 2 * rc.nmax + 1));
    for (std::size_t j = 0; j < sh.size; ++j) {
        Frequency xi = sh.unflat(j);
        for (auto& v : xi) v -= rc.nmax;
        const MomentValue mv = moment(m, xi);
        for (int v : xi) out << v << ',';
        out << format_double(mv.value.real()) << ',' << format_double(mv.value.imag()) << ','
            << format_double(mv.error) << '\n';
    }
    emit(rc, out.str());
}

void cmd_aux(const RunConfig& rc) {
    const Measure m = load(rc);
    if (rc.coordinate < 0 || rc.coordinate >= dimension(m)) fail(ErrorCode::InvalidArgument, "--coordinate out of range");
    const Measure mc = dimension(m) == 1 ? m : coordinate_marginal(m, rc.coordinate);
    const MomentSequence mu = moment_sequence(mc, rc.nmax);
    const AuxMatrix A = aux_matrix(mu, rc.nmax);
    emit(rc, aux_matrix_csv(A));
    summary(rc, {{"order", rc.nmax}, {"coordinate", rc.coordinate}, {"consistency_residual", consistency_residual(A, mu)}});
}

void cmd_classify(const RunConfig& rc) {
    const Measure m = load(rc);
    if (const auto* ifs = std::get_if<DigitIFS>(&m)) {
        const ClassificationReport r = classify(*ifs);
        emit(rc, rc.table ? classification_table(r) : to_json(r).dump(2) + "\n");
        return;
    }
    const bool gate = slice_singularity_gate(m);
    emit(rc, rc.table ? std::string("slice singular in any order: ") + (gate ? "yes\n" : "no\n")
                      : Json{{"overall", gate}}.dump(2) + "\n");
}

void cmd_expand(const RunConfig& rc) {
    const Measure m = load(rc);
    const int d = dimension(m);
    const CoeffTensor c = analyze(m, load_f(rc, d), parse_orders(rc.orders, d), parse_quadrature(rc.quad, rc.seed), rc.threads);
    if (rc.format == "csv") {
        emit(rc, coeff_tensor_csv(c));
        summary(rc, {{"bessel_defect", c.norm_sq - c.energy()}, {"error_estimate", c.error_estimate}});
    } else {
        emit(rc, to_json(c).dump(2) + "\n");
    }
}

void cmd_reconstruct(const RunConfig& rc) {
    const Measure m = load(rc);
    const int d = dimension(m);
    const ReconstructionResult r =
        reconstruction_error(m, load_f(rc, d), parse_orders(rc.orders, d), parse_quadrature(rc.quad, rc.seed), rc.threads);
    emit(rc, sweep_csv(r));
    summary(rc, {{"error", r.error}});
}

void cmd_nct(const RunConfig& rc) {
    const Measure m = load(rc);
    const int d = dimension(m);
    const auto parts = split(rc.grid);
    if (parts.size() < 2) fail(ErrorCode::InvalidArgument, "--grid needs R,THETA-COUNTS");
    double radius = 0.0;
    std::vector<int> counts;
    try {
        radius = std::stod(parts[0]);
        for (std::size_t i = 1; i < parts.size(); ++i) counts.push_back(std::stoi(parts[i]));
    } catch (const std::exception&) {
        fail(ErrorCode::InvalidArgument, "bad --grid '" + rc.grid + "'");
    }
    if (!(radius >= 0.0 && radius <= kMaxDiskRadius))
        fail(ErrorCode::PointOutsideDisk, "grid radius must lie in [0, 0.999]");
    if (counts.size() == 1) counts.assign(d, counts[0]);
    if (static_cast<int>(counts.size()) != d) fail(ErrorCode::InvalidArgument, "--grid needs one theta count or one per coordinate");
    for (int k : counts)
        if (k < 1) fail(ErrorCode::InvalidArgument, "theta counts must be positive");

    const PowerSeriesGrid g = nct_d(m, load_f(rc, d), parse_orders(rc.orders, d), parse_quadrature(rc.quad, rc.seed), rc.threads);
    std::ostringstream out;
    for (int c = 0; c < d; ++c) out << "z" << c << "_re,z" << c << "_im,";
    out << "value_re,value_im\n";
    const Shape sh(counts);
    std::vector<Complex> z(d);
    for (std::size_t j = 0; j < sh.size; ++j) {
        const auto idx = sh.unflat(j);
        for (int c = 0; c < d; ++c) z[c] = std::polar(radius, 2.0 * std::numbers::pi * idx[c] / counts[c]);
        const Complex v = g.evaluate(z);
        for (const auto& zc : z) out << format_double(zc.real()) << ',' << format_double(zc.imag()) << ',';
        out << format_double(v.real()) << ',' << format_double(v.imag()) << '\n';
    }
    emit(rc, out.str());
}

void cmd_verify(const RunConfig& rc) {
    const Measure m = load(rc);
    VerifyOptions o;
    o.seed = rc.seed;
    o.threads = rc.threads;
    o.quadrature = parse_quadrature(rc.verify_quad, rc.seed);
    emit(rc, verify_suite(m, rc.suite, o).dump(2) + "\n");
}

int report(const std::string& code, const std::string& message, int status) {
    std::cerr << Json{{"error", code}, {"message", message}}.dump() << '\n';
    return status;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fourier expansions and Cauchy transforms for slice-singular measures"};
    app.require_subcommand(1);
    RunConfig rc;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", rc.config, "measure config (JSON)")->required();
        sub->add_option("--out", rc.out, "output file (default: stdout)");
        sub->add_option("--threads", rc.threads, "worker threads")->check(CLI::Range(1, 256));
        sub->add_option("--seed", rc.seed, "random seed");
    };
    auto series = [&](CLI::App* sub) {
        sub->add_option("--f", rc.fspec, "trig poly JSON {frequencies, coefficients} (default: 1)");
        sub->add_option("--orders", rc.orders, "truncation orders N1,N2,...")->required();
        sub->add_option("--quad", rc.quad, "prefix:K | mc:COUNT[:DEPTH]");
    };

    auto* moments = app.add_subcommand("moments", "Fourier moments on the box [-nmax, nmax]^d (CSV)");
    common(moments);
    moments->add_option("--nmax", rc.nmax, "largest frequency")->check(CLI::NonNegativeNumber);

    auto* aux = app.add_subcommand("aux", "auxiliary matrix of a coordinate marginal (CSV)");
    common(aux);
    aux->add_option("--nmax", rc.nmax, "matrix order N")->check(CLI::NonNegativeNumber);
    aux->add_option("--coordinate", rc.coordinate, "marginal coordinate for d > 1");

    auto* cls = app.add_subcommand("classify", "slice singularity report (JSON)");
    common(cls);
    cls->add_flag("--table", rc.table, "human-readable table");

    auto* expand = app.add_subcommand("expand", "coefficient tensor (JSON or CSV)");
    common(expand);
    series(expand);
    expand->add_option("--format", rc.format, "json | csv")->check(CLI::IsMember({"json", "csv"}));

    auto* recon = app.add_subcommand("reconstruct", "reconstruction sweep (CSV)");
    common(recon);
    series(recon);

    auto* nct = app.add_subcommand("nct", "transform on a polydisk grid (CSV)");
    common(nct);
    series(nct);
    nct->add_option("--grid", rc.grid, "R,THETA-COUNTS");

    auto* verify = app.add_subcommand("verify", "invariant suites (JSON)");
    common(verify);
    verify->add_option("--suite", rc.suite, "measure | kaczmarz | expansion | transforms | classify | all")
        ->check(CLI::IsMember({"measure", "kaczmarz", "expansion", "transforms", "classify", "all"}));
    verify->add_option("--quad", rc.verify_quad, "prefix:K | mc:COUNT[:DEPTH] (default prefix:8)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return report("invalid-argument", e.what(), 2);
    }

    try {
        if (*moments) cmd_moments(rc);
        else if (*aux) cmd_aux(rc);
        else if (*cls) cmd_classify(rc);
        else if (*expand) cmd_expand(rc);
        else if (*recon) cmd_reconstruct(rc);
        else if (*nct) cmd_nct(rc);
        else if (*verify) cmd_verify(rc);
    } catch (const Error& e) {
        return report(std::string(to_string(e.code())), e.what(), is_numeric_budget(e.code()) ? 3 : 2);
    } catch (const std::exception& e) {
        return report("internal", e.what(), 1);
    }
    return 0;
}
