#include "geoweb/cli.hpp"

#include "geoweb/connection.hpp"
#include "geoweb/curvature.hpp"
#include "geoweb/error.hpp"
#include "geoweb/geodesics.hpp"
#include "geoweb/invariants.hpp"
#include "geoweb/report.hpp"
#include "geoweb/sampling.hpp"
#include "geoweb/webfile.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

namespace geoweb {

namespace {

using Cell = nlohmann::ordered_json;

// Report layout shared by every subcommand: metadata, then one row per line.
struct Table {
    std::vector<std::pair<std::string, Cell>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c)
{
    if (c.is_null()) return "";
    if (c.is_number_float()) return format_real(c.get<double>());
    if (c.is_number_integer()) return std::to_string(c.get<long long>());
    if (c.is_boolean()) return c.get<bool>() ? "true" : "false";
    if (c.is_string()) return c.get<std::string>();
    return c.dump();
}

void write_csv(std::ostream& out, const Table& t)
{
    for (const auto& [key, value] : t.meta) {
        std::string text = cell_text(value);
        std::replace(text.begin(), text.end(), '\n', ' ');
        out << "# " << key << ": " << text << '\n';
    }
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_field(t.columns[i]);
    out << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_field(cell_text(row[i]));
        out << '\n';
    }
}

void write_json(std::ostream& out, const Table& t)
{
    Cell doc = Cell::object();
    for (const auto& [key, value] : t.meta) doc[key] = value;
    Cell rows = Cell::array();
    for (const auto& row : t.rows) {
        Cell obj = Cell::object();
        for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = row[i];
        rows.push_back(std::move(obj));
    }
    doc["rows"] = std::move(rows);
    out << doc.dump(2) << '\n';
}

std::vector<double> parse_coords(const std::string& text, int n, const std::string& flag)
{
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find(',', pos), text.size());
        std::string item = text.substr(pos, end - pos);
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        double v = 0.0;
        const auto* first = item.data();
        const auto* last = item.data() + item.size();
        if (*first == '+') ++first;
        const auto [ptr, ec] = std::from_chars(first, last, v);
        if (item.empty() || ec != std::errc() || ptr != last) throw SchemaError(flag + ": cannot parse '" + item + "'");
        out.push_back(v);
        pos = end + 1;
    }
    if (static_cast<int>(out.size()) != n)
        throw SchemaError(flag + ": expected " + std::to_string(n) + " coordinates, got " + std::to_string(out.size()));
    return out;
}

std::string join_reals(std::span<const double> v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_real(v[i]);
    return s;
}

Cell real(double v) { return Cell(v); }

struct Options {
    std::string webfile;
    int grid = 5;
    std::optional<std::size_t> random;
    std::uint64_t seed = 1;
    std::string out;
    std::string format = "csv";
};

struct Loaded {
    WebChart web;
    std::string digest;
};

Loaded load(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw SchemaError(path + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    return {parse_webfile(text), "fnv1a64:" + fnv1a_hex(text)};
}

void add_header(Table& t, const std::string& command, const Loaded& l)
{
    t.meta.emplace_back("tool", std::string(kToolName) + " " + kToolVersion);
    t.meta.emplace_back("command", command);
    t.meta.emplace_back("input_digest", l.digest);
    t.meta.emplace_back("dimension", l.web.dim());
    t.meta.emplace_back("foliations", l.web.size());
}

std::vector<std::vector<double>> sample(Table& t, const Options& o, const WebChart& web)
{
    if (o.random) {
        t.meta.emplace_back("sampling", "random " + std::to_string(*o.random) + " seed " + std::to_string(o.seed));
        return random_points(web.domain(), *o.random, o.seed);
    }
    t.meta.emplace_back("sampling", "grid " + std::to_string(o.grid));
    return grid_points(web.domain(), o.grid);
}

void point_columns(Table& t, int n)
{
    t.columns.push_back("index");
    for (int c = 1; c <= n; ++c) t.columns.push_back("x" + std::to_string(c));
    t.columns.push_back("status");
}

std::vector<Cell> point_cells(std::size_t index, std::span<const double> x, bool excluded)
{
    std::vector<Cell> row{Cell(index)};
    for (double v : x) row.push_back(real(v));
    row.push_back(excluded ? "degenerate" : "ok");
    return row;
}

int cmd_check(const Options& o, Table& t)
{
    const Loaded l = load(o.webfile);
    add_header(t, "check", l);
    const auto pts = sample(t, o, l.web);
    const GeodesicityReport r = geodesicity_test(l.web, pts);

    t.meta.emplace_back("points", r.rows.size());
    t.meta.emplace_back("excluded", r.excluded);
    if (r.vacuous) t.meta.emplace_back("note", "d = n+2: every such web is geodesic");
    t.meta.emplace_back("max_residual", real(r.max_discrepancy));
    t.meta.emplace_back("verdict", geodesic_label(r.verdict));

    point_columns(t, l.web.dim());
    for (const char* c : {"residual", "scale", "diagnostic"}) t.columns.emplace_back(c);
    for (const auto& row : r.rows) {
        auto cells = point_cells(row.index, row.point, row.excluded);
        cells.push_back(row.excluded ? Cell() : real(row.discrepancy));
        cells.push_back(row.excluded ? Cell() : real(row.scale));
        cells.push_back(row.diagnostic);
        t.rows.push_back(std::move(cells));
    }
    return verdict_exit_code(r.verdict);
}

int cmd_linearize(const Options& o, Table& t)
{
    const Loaded l = load(o.webfile);
    add_header(t, "linearize", l);
    const auto pts = sample(t, o, l.web);
    const LinearizabilityReport r = linearizability_verdict(l.web, pts);

    t.meta.emplace_back("points", r.rows.size());
    t.meta.emplace_back("excluded", r.excluded);
    t.meta.emplace_back("obstruction", l.web.dim() == 2 ? "cotton" : "weyl");
    t.meta.emplace_back("geodesicity", geodesic_label(r.geodesicity.verdict));
    t.meta.emplace_back("max_residual", real(r.geodesicity.max_discrepancy));
    t.meta.emplace_back("max_obstruction", real(r.max_obstruction));
    t.meta.emplace_back("verdict", linearizable_label(r.verdict));

    point_columns(t, l.web.dim());
    for (const char* c : {"residual", "obstruction", "obstruction_scale", "diagnostic"}) t.columns.emplace_back(c);
    for (const auto& row : r.rows) {
        auto cells = point_cells(row.index, row.point, row.excluded);
        cells.push_back(row.excluded ? Cell() : real(row.discrepancy));
        cells.push_back(row.excluded ? Cell() : real(row.obstruction));
        cells.push_back(row.excluded ? Cell() : real(row.scale));
        cells.push_back(row.diagnostic);
        t.rows.push_back(std::move(cells));
    }
    return verdict_exit_code(r.verdict);
}

int cmd_invariants(const Options& o, Table& t)
{
    const Loaded l = load(o.webfile);
    add_header(t, "invariants", l);
    const auto pts = sample(t, o, l.web);
    const GeodesicityReport r = geodesicity_test(l.web, pts);
    const int n = l.web.dim();

    t.meta.emplace_back("points", r.rows.size());
    t.meta.emplace_back("excluded", r.excluded);

    point_columns(t, n);
    t.columns.emplace_back("foliation");
    for (int i = 1; i <= n; ++i) t.columns.push_back("a" + std::to_string(i));
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) t.columns.push_back("s" + std::to_string(i) + "_" + std::to_string(j));
    t.columns.emplace_back("diagnostic");
    const std::size_t width = t.columns.size();

    for (const auto& row : r.rows) {
        if (row.excluded) {
            auto cells = point_cells(row.index, row.point, true);
            cells.resize(width - 1);
            cells.push_back(row.diagnostic);
            t.rows.push_back(std::move(cells));
            continue;
        }
        for (const auto& e : row.extras) {
            auto cells = point_cells(row.index, row.point, false);
            cells.push_back(e.foliation);
            for (double a : e.projective_class) cells.push_back(real(a));
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) cells.push_back(real(e.s[static_cast<std::size_t>(i * n + j)]));
            cells.push_back("");
            t.rows.push_back(std::move(cells));
        }
    }
    return kExitOk;
}

int cmd_connection(const Options& o, const std::string& at, const std::string& gauge, Table& t)
{
    const Loaded l = load(o.webfile);
    add_header(t, "connection", l);
    const int n = l.web.dim();
    const auto x = parse_coords(at, n, "--at");

    WebChart web = l.web;
    if (gauge == "pointed") {
        if (!web.pointed()) throw SchemaError("--gauge pointed: the web file has no pointed foliation");
        web = web.pointed_in_normal_slot();
        t.meta.emplace_back("note", "pointed foliation " + std::to_string(*l.web.pointed()) + " is moved to slot " +
                                        std::to_string(n + 1) + " for theta and a");
    }
    t.meta.emplace_back("gauge", gauge);
    t.meta.emplace_back("point", join_reals(x));

    t.columns = {"quantity", "i", "j", "k", "value"};
    auto emit = [&](const char* q, std::optional<int> i, std::optional<int> j, std::optional<int> k, double v) {
        t.rows.push_back({q, i ? Cell(*i) : Cell(), j ? Cell(*j) : Cell(), k ? Cell(*k) : Cell(), real(v)});
    };

    const NormalizedCoframe cof = normalize_coframe(web, x, 2);
    const BasisInvariant first = basis_invariants(cof, web, n + 2);
    const ThetaSystem th = theta_system(cof, first);
    const ConnectionField conn = canonical_christoffels(cof, th);

    // Gamma^k_ij listed as (k, i, j)
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) emit("frame_gamma", k + 1, i + 1, j + 1, conn.frame_gamma(k, i, j).value());
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) emit("coord_gamma", c + 1, a + 1, b + 1, conn.coord_gamma(c, a, b).value());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) emit("theta", i + 1, j + 1, std::nullopt, th.theta(i, j).value());
    for (int i = 0; i < n; ++i) emit("theta_next", i + 1, std::nullopt, std::nullopt, th.theta_next[static_cast<std::size_t>(i)].value());
    for (int k = n + 2; k <= web.size(); ++k) {
        const BasisInvariant inv = k == n + 2 ? first : basis_invariants(cof, web, k);
        for (int i = 0; i < n; ++i) emit("a", k, i + 1, std::nullopt, inv.a[static_cast<std::size_t>(i)].value());
    }
    return kExitOk;
}

struct GeodesicFlags {
    std::string from;
    int leaf = 1;
    std::string dir;
    double duration = 1.0;
    double step = 1e-3;
    double speed = 1.0;
    std::string connection = "canonical";
};

int cmd_geodesic(const Options& o, const GeodesicFlags& g, Table& t)
{
    const Loaded l = load(o.webfile);
    add_header(t, "geodesic", l);
    const WebChart& web = l.web;
    const int n = web.dim();
    if (g.leaf < 1 || g.leaf > web.size())
        throw SchemaError("--leaf: index " + std::to_string(g.leaf) + " out of range 1.." + std::to_string(web.size()));
    if (!(g.step > 0.0) || !(g.duration >= 0.0)) throw SchemaError("--h must be positive and --T non-negative");
    if (g.connection == "pointed" && !web.pointed()) throw SchemaError("--connection pointed: the web file has no pointed foliation");

    const auto x0 = parse_coords(g.from, n, "--from");
    std::optional<std::vector<double>> dir;
    if (!g.dir.empty()) dir = parse_coords(g.dir, n, "--dir");
    const auto v0 = leaf_tangent(web, g.leaf, x0, dir, g.speed);
    const auto choice = g.connection == "pointed" ? ConnectionChoice::pointed : ConnectionChoice::canonical;
    const Trajectory traj = integrate_geodesic(web_connection_field(web, choice), x0, v0, g.duration, g.step);

    t.meta.emplace_back("connection", g.connection);
    t.meta.emplace_back("leaf", g.leaf);
    t.meta.emplace_back("from", join_reals(x0));
    t.meta.emplace_back("velocity", join_reals(v0));
    t.meta.emplace_back("T", real(g.duration));
    t.meta.emplace_back("h", real(g.step));
    t.meta.emplace_back("method", "rk4");
    t.meta.emplace_back("leaf_drift", real(leaf_drift(web, g.leaf, traj)));
    t.meta.emplace_back("halted", traj.halted);
    if (traj.halted) t.meta.emplace_back("diagnostic", traj.diagnostic);

    t.columns.emplace_back("t");
    for (int c = 1; c <= n; ++c) t.columns.push_back("x" + std::to_string(c));
    for (int i = 1; i <= web.size(); ++i) t.columns.push_back("f" + std::to_string(i));
    for (const auto& s : traj.states) {
        std::vector<Cell> cells{real(s.t)};
        for (double v : s.x) cells.push_back(real(v));
        for (int i = 0; i < web.size(); ++i) {
            try {
                cells.push_back(real(eval_field(web.function(i), s.x, 0).value()));
            } catch (const DomainError&) {
                cells.push_back(Cell());
            }
        }
        t.rows.push_back(std::move(cells));
    }
    return kExitOk;
}

void add_common(CLI::App* sub, Options& o, bool sampling)
{
    sub->add_option("webfile", o.webfile, "web file (JSON)")->required();
    if (sampling) {
        auto* grid = sub->add_option("--grid", o.grid, "k^n lattice in the domain ball (default 5)")->check(CLI::PositiveNumber);
        auto* random = sub->add_option("--random", o.random, "N random points in the domain ball");
        sub->add_option("--seed", o.seed, "seed of the random sample (default 1)")->needs(random);
        grid->excludes(random);
    }
    sub->add_option("--out", o.out, "write the report to this path instead of stdout");
    sub->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Geodesic webs: canonical connections, geodesicity and linearizability", kToolName};
    app.set_help_flag("--help", "print this help and exit"); // --h is the step flag of geodesic
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Options o;
    std::string at, gauge = "zero";
    GeodesicFlags g;

    auto* check = app.add_subcommand("check", "geodesicity report; exit 0 geodesic, 2 not, 3 inconclusive");
    add_common(check, o, true);
    auto* linearize = app.add_subcommand("linearize", "linearizability report; exit 0 linearizable, 2 not, 3 inconclusive");
    add_common(linearize, o, true);
    auto* invariants = app.add_subcommand("invariants", "basis invariant classes and skew invariants over the sample");
    add_common(invariants, o, true);

    auto* connection = app.add_subcommand("connection", "Christoffel symbols, theta matrix and a-invariants at a point");
    add_common(connection, o, false);
    connection->add_option("--at", at, "comma-separated coordinates")->required();
    connection->add_option("--gauge", gauge, "zero (canonical, t = 0) or pointed")->check(CLI::IsMember({"zero", "pointed"}));

    auto* geodesic = app.add_subcommand("geodesic", "integrate a geodesic launched tangent to a leaf");
    add_common(geodesic, o, false);
    geodesic->add_option("--from", g.from, "comma-separated start point")->required();
    geodesic->add_option("--leaf", g.leaf, "1-based foliation whose leaf is followed")->required();
    geodesic->add_option("--dir", g.dir, "launch direction (projected onto the leaf)");
    geodesic->add_option("--T", g.duration, "integration horizon (default 1)");
    geodesic->add_option("--h", g.step, "RK4 step (default 1e-3)");
    geodesic->add_option("--speed", g.speed, "launch speed (default 1)");
    geodesic->add_option("--connection", g.connection, "canonical or pointed")
        ->check(CLI::IsMember({"canonical", "pointed"}));

    std::ostringstream cli_out, cli_err;
    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, cli_out, cli_err);
        out << cli_out.str();
        err << cli_err.str();
        return code == 0 ? kExitOk : kExitInputError;
    }

    Table table;
    int code = kExitOk;
    try {
        if (check->parsed()) code = cmd_check(o, table);
        else if (linearize->parsed()) code = cmd_linearize(o, table);
        else if (invariants->parsed()) code = cmd_invariants(o, table);
        else if (connection->parsed()) code = cmd_connection(o, at, gauge, table);
        else code = cmd_geodesic(o, g, table);
    } catch (const SchemaError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    } catch (const Error& e) {
        // degenerate launch points, step size blow-ups and the like: the request cannot be served
        err << "error: " << e.what() << '\n';
        return kExitInputError;
    }

    std::ostringstream report;
    if (o.format == "json") write_json(report, table);
    else write_csv(report, table);

    if (o.out.empty()) {
        out << report.str();
    } else {
        std::ofstream file(o.out, std::ios::binary);
        if (!file || !(file << report.str())) {
            err << "error: cannot write " << o.out << '\n';
            return kExitInputError;
        }
    }
    return code;
}

} // namespace geoweb
