#include "logopole/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "logopole/coords.hpp"
#include "logopole/errors.hpp"
#include "logopole/harmonics.hpp"
#include "logopole/logopoles.hpp"

namespace logopole::cli {
namespace {

// Raised for flag values CLI11 accepts syntactically but we cannot use.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoFailure {
    int code;
    std::string message;
};

struct Common {
    std::string family = "logopole";
    int n = 0;
    int m = 0;
    double R = 1.0;
    double phi = 0.0;
    std::string method = "auto";
    double tol = 1e-11;
    double tube = 1e-8;
    std::string focal = "centred";
    bool allow_unstable = false;
    int threads = 0;
};

struct Range {
    double min = 0.0, max = 1.0;
    int count = 2;
};

struct Lattice {
    Range rho{0.0, 3.0, 101};
    Range z{-1.0, 2.0, 101};
};

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string lower(std::string s)
{
    for (char& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

// "auto" maps to nullopt.
std::optional<Method> parse_method(const std::string& name)
{
    if (lower(name) == "auto")
        return std::nullopt;
    for (int i = 0; i <= static_cast<int>(Method::Quadrature); ++i) {
        const auto m = static_cast<Method>(i);
        if (lower(std::string(to_string(m))) == lower(name))
            return m;
    }
    throw UsageError("unknown method '" + name + "'");
}

std::vector<std::string> split(const std::string& s)
{
    std::vector<std::string> parts;
    std::stringstream in(s);
    for (std::string item; std::getline(in, item, ',');)
        if (!item.empty())
            parts.push_back(item);
    return parts;
}

void validate(const Common& c)
{
    static const char* families[] = {"logopole", "pssh", "ssh1", "ssh2"};
    if (std::find(std::begin(families), std::end(families), c.family) == std::end(families))
        throw UsageError("unknown family '" + c.family + "'");
    if (c.focal != "centred" && c.focal != "offset")
        throw UsageError("--focal must be centred or offset");
    if (!(c.R > 0.0))
        throw UsageError("--R must be positive");
    if (!(c.tol > 0.0))
        throw UsageError("--tol must be positive");
    parse_method(c.method);
}

void validate(const Range& r, const char* name)
{
    if (r.count < 2)
        throw UsageError(std::string("--") + name + "-count must be at least 2");
    if (!(r.min < r.max))
        throw UsageError(std::string("--") + name + "-min must be below --" + name + "-max");
}

double node(const Range& r, int i)
{
    return i == r.count - 1 ? r.max : r.min + (r.max - r.min) * i / (r.count - 1);
}

EvalResult evaluate(const Common& c, int n, const FieldPoint& p, std::optional<Method> route)
{
    if (c.family == "logopole") {
        MethodPolicy policy;
        policy.route = route;
        policy.tube = c.tube;
        policy.quad_tol = c.tol;
        policy.allow_unstable = c.allow_unstable;
        return evaluate_logopole(n, c.m, p, policy);
    }
    if (route && *route != Method::Direct)
        throw UsageError("family " + c.family + " has only the direct route");
    if (c.family == "pssh")
        return pssh(n, c.m, p, c.focal == "offset" ? FocalSystem::Offset : FocalSystem::Centred);
    if (c.family == "ssh1")
        return ssh_exterior(n, c.m, p);
    return ssh_second_kind(n, c.m, p);
}

bool convergence_kind(ErrorKind k)
{
    return k == ErrorKind::NonConvergence || k == ErrorKind::SlowConvergence || k == ErrorKind::NoConvergence ||
           k == ErrorKind::TailTooLarge;
}

int exit_for(const Error& e)
{
    if (is_singular_kind(e.kind()))
        return Singular;
    if (convergence_kind(e.kind()))
        return NoConvergence;
    return BadFlags;
}

void add_common(CLI::App& app, Common& c)
{
    app.add_option("--family", c.family, "logopole, pssh, ssh1 or ssh2")->capture_default_str();
    app.add_option("--n", c.n, "degree")->capture_default_str();
    app.add_option("--m", c.m, "order")->capture_default_str();
    app.add_option("--R", c.R, "focal length")->capture_default_str();
    app.add_option("--phi", c.phi, "azimuth (radians)")->capture_default_str();
    app.add_option("--method", c.method, "evaluation route or auto")->capture_default_str();
    app.add_option("--tol", c.tol, "quadrature tolerance")->capture_default_str();
    app.add_option("--tube", c.tube, "singular tube radius in units of R")->capture_default_str();
    app.add_option("--focal", c.focal, "pssh focal system: centred or offset")->capture_default_str();
    app.add_flag("--allow-unstable", c.allow_unstable, "run recurrences outside their stable region");
    app.add_option("--threads", c.threads, "worker threads (0 = hardware)")->capture_default_str();
}

void add_lattice(CLI::App& app, Lattice& g)
{
    app.add_option("--rho-min", g.rho.min)->capture_default_str();
    app.add_option("--rho-max", g.rho.max)->capture_default_str();
    app.add_option("--rho-count", g.rho.count)->capture_default_str();
    app.add_option("--z-min", g.z.min)->capture_default_str();
    app.add_option("--z-max", g.z.max)->capture_default_str();
    app.add_option("--z-count", g.z.count)->capture_default_str();
}

template <class F>
void parallel_for(int count, int threads, F&& f)
{
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(count, 1));
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    auto body = [&](int w) {
        try {
            for (int i = next++; i < count; i = next++)
                f(i);
        } catch (...) {
            errors[static_cast<std::size_t>(w)] = std::current_exception();
            next = count;
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w)
        pool.emplace_back(body, w);
    body(0);
    for (auto& t : pool)
        t.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// Writes through a temporary file so a failed run leaves nothing behind.
void write_atomically(const std::string& path, const std::string& text)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoFailure{IoError, "cannot open " + tmp};
        f << text;
        f.flush();
        if (!f) {
            f.close();
            std::remove(tmp.c_str());
            throw IoFailure{IoError, "cannot write " + tmp};
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::remove(tmp.c_str());
        throw IoFailure{IoError, "cannot rename to " + path + ": " + ec.message()};
    }
}

void emit(const std::string& path, const std::string& text, std::ostream& out)
{
    if (path.empty() || path == "-")
        out << text;
    else
        write_atomically(path, text);
}

std::string value_row(double rho, double z, double phi, const EvalResult& e)
{
    return num(rho) + "," + num(z) + "," + num(phi) + "," + num(e.value.real()) + "," + num(e.value.imag()) + "," +
           std::string(to_string(e.method)) + "," + num(e.est_error);
}

const char* kHeader = "rho,z,phi,re,im,method,err";

int cmd_eval(const Common& c, double rho, double z, bool header, std::ostream& out)
{
    validate(c);
    const FieldPoint p = make_point(rho, z, c.phi, c.R);
    const EvalResult e = evaluate(c, c.n, p, parse_method(c.method));
    if (header)
        out << kHeader << "\n";
    out << value_row(rho, z, c.phi, e) << "\n";
    return Ok;
}

int cmd_grid(const Common& c, const Lattice& g, std::optional<double> arcsinh, const std::string& path,
             std::ostream& out)
{
    validate(c);
    validate(g.rho, "rho");
    validate(g.z, "z");
    if (path.empty())
        throw UsageError("grid needs --out");
    const auto route = parse_method(c.method);
    const int count = g.rho.count * g.z.count;
    std::vector<std::string> rows(static_cast<std::size_t>(count));
    parallel_for(count, c.threads, [&](int i) {
        const double z = node(g.z, i / g.rho.count), rho = node(g.rho, i % g.rho.count);
        std::string row;
        try {
            const EvalResult e = evaluate(c, c.n, make_point(rho, z, c.phi, c.R), route);
            row = value_row(rho, z, c.phi, e);
            if (arcsinh)
                row += "," + num(std::asinh(*arcsinh * e.value.real()));
        } catch (const Error& e) {
            if (!is_singular_kind(e.kind()))
                throw;
            row = num(rho) + "," + num(z) + "," + num(c.phi) + ",,,SINGULAR,";
            if (arcsinh)
                row += ",";
        }
        rows[static_cast<std::size_t>(i)] = std::move(row);
    });
    std::string text = std::string(kHeader) + (arcsinh ? ",asinh" : "") + "\n";
    for (const auto& r : rows)
        text += r + "\n";
    emit(path, text, out);
    return Ok;
}

struct Sample {
    double rho, z;
};

double radical_inverse(unsigned index, unsigned base)
{
    double f = 1.0, r = 0.0;
    for (unsigned i = index; i > 0; i /= base) {
        f /= base;
        r += f * (i % base);
    }
    return r;
}

// Halton points in the lattice box, randomly shifted by the seed, kept
// away from the segment by min_dist (units of R).
std::vector<Sample> quasi_random(const Lattice& g, int count, unsigned seed, double min_dist, double R)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double s1 = u(rng), s2 = u(rng);
    std::vector<Sample> pts;
    for (unsigned i = 1; static_cast<int>(pts.size()) < count && i < 10000000u; ++i) {
        const double a = std::fmod(radical_inverse(i, 2) + s1, 1.0), b = std::fmod(radical_inverse(i, 3) + s2, 1.0);
        const Sample s{g.rho.min + (g.rho.max - g.rho.min) * a, g.z.min + (g.z.max - g.z.min) * b};
        if (singular_distance(make_point(s.rho, s.z, 0.0, R)) > min_dist * R)
            pts.push_back(s);
    }
    return pts;
}

std::vector<Sample> lattice_points(const Lattice& g)
{
    std::vector<Sample> pts;
    for (int j = 0; j < g.z.count; ++j)
        for (int i = 0; i < g.rho.count; ++i)
            pts.push_back({node(g.rho, i), node(g.z, j)});
    return pts;
}

std::vector<Method> default_methods(const Common& c)
{
    if (c.family != "logopole")
        return {Method::Direct};
    return {Method::MultipoleSeries,    Method::OffsetSeries,     Method::SecondKindSum,
            Method::ClosedForm,         Method::Separated,        Method::StableMinusM,
            Method::NaiveMinusM,        Method::RecurrenceMinusM, Method::ForwardRecurrence,
            Method::BackwardRecurrence, Method::AxisFormula,      Method::RecurrenceM,
            Method::NegativeDegree,     Method::NegativeOrder,    Method::Quadrature};
}

double rel_dev(std::complex<double> a, std::complex<double> b)
{
    const double d = std::abs(a - b), s = std::abs(b);
    return s == 0.0 ? d : d / s;
}

struct Job {
    Sample s;
    int n;
};

std::vector<Job> jobs_for(const std::vector<Sample>& pts, int n_lo, int n_hi)
{
    std::vector<Job> jobs;
    for (const auto& s : pts)
        for (int n = n_lo; n <= n_hi; ++n)
            jobs.push_back({s, n});
    return jobs;
}

int cmd_compare(const Common& c, const std::vector<Sample>& pts, int n_max, const std::string& methods_flag,
                const std::string& path, std::ostream& out, std::ostream& err)
{
    validate(c);
    std::vector<Method> methods;
    if (methods_flag.empty())
        methods = default_methods(c);
    else
        for (const auto& name : split(methods_flag)) {
            const auto m = parse_method(name);
            if (!m)
                throw UsageError("compare needs explicit methods, not auto");
            methods.push_back(*m);
        }
    if (methods.size() < 2)
        throw UsageError("compare needs at least two methods");
    const std::vector<Job> jobs = jobs_for(pts, c.n, std::max(n_max, c.n));
    const std::size_t k = methods.size();
    std::vector<std::vector<std::optional<std::complex<double>>>> vals(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), c.threads, [&](int i) {
        const Job& j = jobs[static_cast<std::size_t>(i)];
        auto& row = vals[static_cast<std::size_t>(i)];
        row.resize(k);
        const FieldPoint p = make_point(j.s.rho, j.s.z, c.phi, c.R);
        for (std::size_t a = 0; a < k; ++a) {
            try {
                row[a] = evaluate(c, j.n, p, methods[a]).value;
            } catch (const Error&) {
            }
        }
    });
    std::string text = "rho,z,phi,n,m,method_a,method_b,re_a,im_a,re_b,im_b,rel_dev\n";
    std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> devs;
    for (std::size_t i = 0; i < jobs.size(); ++i)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a + 1; b < k; ++b) {
                const auto& va = vals[i][a];
                const auto& vb = vals[i][b];
                if (!va || !vb)
                    continue;
                const double d = rel_dev(*va, *vb);
                devs[{a, b}].push_back(d);
                text += num(jobs[i].s.rho) + "," + num(jobs[i].s.z) + "," + num(c.phi) + "," +
                        std::to_string(jobs[i].n) + "," + std::to_string(c.m) + "," +
                        std::string(to_string(methods[a])) + "," + std::string(to_string(methods[b])) + "," +
                        num(va->real()) + "," + num(va->imag()) + "," + num(vb->real()) + "," + num(vb->imag()) +
                        "," + num(d) + "\n";
            }
    emit(path, text, out);
    std::ostream& summary = path.empty() || path == "-" ? err : out;
    for (auto& [key, d] : devs) {
        std::sort(d.begin(), d.end());
        const double median = d.size() % 2 ? d[d.size() / 2] : 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
        summary << to_string(methods[key.first]) << " vs " << to_string(methods[key.second]) << ": max "
                << num(d.back()) << " median " << num(median) << " over " << d.size() << "\n";
    }
    if (devs.empty())
        summary << "no point where two methods both applied\n";
    return Ok;
}

int cmd_errormap(const Common& c, const Lattice& g, int n_max, const std::string& reference_flag,
                 const std::string& path, std::ostream& out)
{
    validate(c);
    validate(g.rho, "rho");
    validate(g.z, "z");
    const auto route = parse_method(c.method);
    const auto reference = parse_method(reference_flag);
    const std::vector<Job> jobs = jobs_for(lattice_points(g), c.n, std::max(n_max, c.n));
    std::vector<std::string> rows(jobs.size());
    parallel_for(static_cast<int>(jobs.size()), c.threads, [&](int i) {
        const Job& j = jobs[static_cast<std::size_t>(i)];
        const FieldPoint p = make_point(j.s.rho, j.s.z, c.phi, c.R);
        std::string method = c.method, dev, status = "ok";
        try {
            const EvalResult e = evaluate(c, j.n, p, route);
            method = std::string(to_string(e.method));
            const EvalResult r = evaluate(c, j.n, p, reference);
            dev = num(std::log10(std::max(rel_dev(e.value, r.value), 1e-17)));
        } catch (const Error& e) {
            status = is_singular_kind(e.kind()) ? "singular" : std::string("failed:") + logopole::to_string(e.kind());
        }
        rows[static_cast<std::size_t>(i)] = num(j.s.rho) + "," + num(j.s.z) + "," + num(c.phi) + "," +
                                            std::to_string(j.n) + "," + std::to_string(c.m) + "," + method + "," +
                                            reference_flag + "," + dev + "," + status;
    });
    std::string text = "rho,z,phi,n,m,method,reference,log10_rel_dev,status\n";
    for (const auto& r : rows)
        text += r + "\n";
    emit(path, text, out);
    return Ok;
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Logopoles and related harmonics"};
    app.require_subcommand(1);

    Common c;
    double rho = 0.0, z = 0.0;
    bool header = false;
    Lattice lattice;
    std::optional<double> arcsinh;
    std::string path, methods, reference = "Quadrature";
    int n_max = 0, samples = 0;
    unsigned seed = 1;
    double min_distance = 0.05;

    auto* eval = app.add_subcommand("eval", "evaluate at one point");
    add_common(*eval, c);
    eval->add_option("--rho", rho)->required();
    eval->add_option("--z", z)->required();
    eval->add_flag("--header", header, "print the CSV header first");

    auto* grid = app.add_subcommand("grid", "evaluate on a rectangular (rho, z) lattice");
    add_common(*grid, c);
    add_lattice(*grid, lattice);
    grid->add_option("--arcsinh", arcsinh, "append asinh(S * re)");
    grid->add_option("--out", path, "output CSV path")->required();

    auto* compare = app.add_subcommand("compare", "pairwise deviations between routes");
    add_common(*compare, c);
    add_lattice(*compare, lattice);
    auto* rho_opt = compare->add_option("--rho", rho, "single point");
    auto* z_opt = compare->add_option("--z", z, "single point");
    rho_opt->needs(z_opt);
    z_opt->needs(rho_opt);
    compare->add_option("--samples", samples, "quasi-random points in the lattice box");
    compare->add_option("--seed", seed, "shift of the quasi-random sequence")->capture_default_str();
    compare->add_option("--min-distance", min_distance, "minimum distance to the segment (units of R)")
        ->capture_default_str();
    compare->add_option("--methods", methods, "comma-separated routes (default: all)");
    compare->add_option("--n-max", n_max, "sweep the degree from --n to --n-max");
    compare->add_option("--out", path, "output CSV path (default stdout)");

    auto* errormap = app.add_subcommand("errormap", "log10 deviation of a route from a reference over a lattice");
    add_common(*errormap, c);
    add_lattice(*errormap, lattice);
    errormap->add_option("--reference", reference, "reference route")->capture_default_str();
    errormap->add_option("--n-max", n_max, "sweep the degree from --n to --n-max");
    errormap->add_option("--out", path, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? Ok : BadFlags;
    }

    try {
        if (eval->parsed())
            return cmd_eval(c, rho, z, header, out);
        if (grid->parsed())
            return cmd_grid(c, lattice, arcsinh, path, out);
        if (compare->parsed()) {
            std::vector<Sample> pts;
            if (rho_opt->count() > 0)
                pts.push_back({rho, z});
            else if (samples > 0)
                pts = quasi_random(lattice, samples, seed, min_distance, c.R);
            else {
                validate(lattice.rho, "rho");
                validate(lattice.z, "z");
                pts = lattice_points(lattice);
            }
            return cmd_compare(c, pts, n_max, methods, path, out, err);
        }
        return cmd_errormap(c, lattice, n_max, reference, path, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return BadFlags;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_for(e);
    } catch (const IoFailure& e) {
        err << "error: " << e.message << "\n";
        return e.code;
    }
}

} // namespace logopole::cli
