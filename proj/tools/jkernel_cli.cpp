// Command-line front end. Exit codes: 0 success, 1 failed check or rejected
// computation, 2 usage error.

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jkernel/jkernel.hpp"

namespace
{

using namespace jkernel;

constexpr int exit_ok = 0;
constexpr int exit_check_failed = 1;
constexpr int exit_usage = 2;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// m_unset marks "--m not given".
constexpr long m_unset = -1;

struct Options {
    long m = m_unset;
    long r = 0;
    std::string k;
    std::string order;
    unsigned long seed = 7;
    std::string gamma;
    std::string word;
    std::string tau;
    std::string z;
    std::string format = "text";
    std::string suite = "all";
    std::string input = "-";
    long power = 1;
    bool at_z0 = false;
    bool pair = false;
    bool resolve = false;
    bool timing = false;
};

Rational need_rational(const std::string &text, const char *flag)
{
    if (text.empty()) {
        throw usage_error(std::string(flag) + " is required");
    }
    try {
        return parse_rational(text);
    } catch (const parse_error &e) {
        throw usage_error(std::string(flag) + ": " + e.what());
    }
}

std::optional<Rational> maybe_rational(const std::string &text, const char *flag)
{
    if (text.empty()) {
        return std::nullopt;
    }
    return need_rational(text, flag);
}

cplx parse_point(const std::string &text, const char *flag)
{
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw usage_error(std::string(flag) + " expects \"x,y\"");
    }
    try {
        std::size_t used = 0;
        const long double x = std::stold(text.substr(0, comma), &used);
        std::size_t used2 = 0;
        const std::string rest = text.substr(comma + 1);
        const long double y = std::stold(rest, &used2);
        if (used != comma || used2 != rest.size()) {
            throw std::invalid_argument("trailing characters");
        }
        return {x, y};
    } catch (const std::exception &) {
        throw usage_error(std::string(flag) + " expects \"x,y\" with decimal numbers, got \"" + text + "\"");
    }
}

SL2Mat parse_gamma(const std::string &text)
{
    std::vector<Integer> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        Integer zv;
        if (item.empty() || zv.set_str(item, 10) != 0) {
            throw usage_error("--gamma expects \"a,b,c,d\" with integers");
        }
        v.push_back(zv);
    }
    if (v.size() != 4) {
        throw usage_error("--gamma expects four integers");
    }
    try {
        return SL2Mat(v[0], v[1], v[2], v[3]);
    } catch (const error &e) {
        throw usage_error(std::string("--gamma: ") + e.what());
    }
}

json read_input(const std::string &path)
{
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path);
        if (!in) {
            throw usage_error("cannot read " + path);
        }
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    try {
        return json::parse(text);
    } catch (const json::exception &e) {
        throw usage_error(std::string("input is not valid JSON: ") + e.what());
    }
}

std::vector<PuiseuxSeries> components_from(const json &j, long m)
{
    if (j.is_array()) {
        std::vector<PuiseuxSeries> h;
        for (const auto &e : j) {
            h.push_back(series_from_json(e));
        }
        if (h.size() != static_cast<std::size_t>(2 * m)) {
            throw usage_error("expected " + std::to_string(2 * m) + " theta components");
        }
        return h;
    }
    return theta_decompose(jacobi_from_json(j), m);
}

void need_index(long m)
{
    if (m < 1) {
        throw usage_error("--m must be a positive integer");
    }
}

class Printer
{
public:
    explicit Printer(const Options &o) : json_(o.format == "json") {}

    void series(const PuiseuxSeries &s) const
    {
        if (json_) {
            emit(to_json(s));
        } else {
            std::cout << s.to_string() << "\n";
        }
    }

    void jacobi(const JacobiSeries &s) const
    {
        if (json_) {
            emit(to_json(s));
        } else {
            std::cout << s.to_string() << "\n";
        }
    }

    void components(const std::vector<PuiseuxSeries> &h, long m) const
    {
        if (json_) {
            json arr = json::array();
            for (const auto &s : h) {
                arr.push_back(to_json(s));
            }
            emit(arr);
            return;
        }
        for (std::size_t r = 0; r < h.size(); ++r) {
            std::cout << "h_{" << m << "," << r << "} = " << h[r].to_string() << "\n";
        }
    }

    void pair(const VVPair &p) const
    {
        if (json_) {
            emit(to_json(p));
        } else {
            std::cout << "phi0 = " << p.comp0.to_string() << "\n"
                      << "phi2 = " << p.comp2.to_string() << "\n";
        }
    }

    template <int N>
    void matrix(const UMatrix<N> &u) const
    {
        if (json_) {
            emit(to_json(u));
            return;
        }
        std::vector<std::vector<std::string>> cells(u.size(), std::vector<std::string>(u.size()));
        std::vector<std::size_t> width(u.size(), 0);
        for (std::size_t i = 0; i < u.size(); ++i) {
            for (std::size_t k = 0; k < u.size(); ++k) {
                cells[i][k] = u(i, k).to_string();
                width[k] = std::max(width[k], cells[i][k].size());
            }
        }
        for (const auto &row : cells) {
            for (std::size_t k = 0; k < row.size(); ++k) {
                std::cout << (k ? "  " : "") << row[k] << std::string(width[k] - row[k].size(), ' ');
            }
            std::cout << "\n";
        }
    }

    void reports(const std::vector<CheckReport> &reps) const
    {
        if (json_) {
            json arr = json::array();
            for (const auto &r : reps) {
                arr.push_back(to_json(r));
            }
            emit(arr);
            return;
        }
        std::size_t w = 0;
        for (const auto &r : reps) {
            w = std::max(w, r.name.size());
        }
        for (const auto &r : reps) {
            std::cout << r.name << std::string(w - r.name.size() + 2, ' ') << (r.passed ? "PASS" : "FAIL")
                      << (r.evidence ? " (evidence)" : "") << "  " << r.witness;
            if (r.ms) {
                std::cout << "  [" << *r.ms << " ms]";
            }
            std::cout << "\n";
        }
    }

private:
    static void emit(const json &j)
    {
        std::cout << j.dump(2) << "\n";
    }

    bool json_;
};

template <int N>
int run_weil(const Options &o, const Printer &out)
{
    GroupWord w;
    if (!o.word.empty() && !o.gamma.empty()) {
        throw usage_error("give either --word or --gamma, not both");
    }
    if (!o.word.empty()) {
        try {
            w = parse_word(o.word);
        } catch (const parse_error &e) {
            throw usage_error(std::string("--word: ") + e.what());
        }
    } else if (!o.gamma.empty()) {
        w = sl2_word(parse_gamma(o.gamma));
    } else {
        throw usage_error("weil needs --word or --gamma");
    }
    UMatrix<N> u = word_product<N>(o.m, w);
    if (o.resolve) {
        SamplePoint pt;
        pt.tau = o.tau.empty() ? cplx(0.1L, 1.2L) : parse_point(o.tau, "--tau");
        pt.z = o.z.empty() ? cplx(0.05L, 0.1L) : parse_point(o.z, "--z");
        if (pt.tau.imag() <= 0) {
            throw usage_error("--tau needs a positive imaginary part");
        }
        u = resolve_scalar<N>(o.m, w, u, pt);
    }
    out.matrix(u);
    return exit_ok;
}

int dispatch(const std::string &cmd, const Options &o)
{
    const Printer out(o);
    if (cmd == "theta") {
        need_index(o.m);
        const JacobiSeries th = theta_j(o.m, o.r, need_rational(o.order, "--order"));
        if (o.at_z0) {
            out.series(restrict_z0(th));
        } else {
            out.jacobi(th);
        }
    } else if (cmd == "eta") {
        const long m = o.m == m_unset ? 1 : o.m;
        need_index(m);
        if (o.power < 1) {
            throw usage_error("--power must be positive");
        }
        const Rational order = need_rational(o.order, "--order");
        const PuiseuxSeries e = pow(eta(order / m + 1), static_cast<unsigned>(o.power));
        out.series(dilate(e, m).truncated(order));
    } else if (cmd == "xi") {
        const Rational order = need_rational(o.order, "--order");
        if (o.pair) {
            const auto [x0, x2] = xi_pair_hat(order);
            VVPair p;
            p.comp0 = x0;
            p.comp2 = x2;
            p.weight = Rational(3);
            p.provenance = "(xi0, xi2)";
            out.pair(p);
        } else if (o.m != m_unset) {
            need_index(o.m);
            out.series(xi_m_star_hat(o.m, order));
        } else {
            out.series(xi_hat(order));
        }
    } else if (cmd == "decompose") {
        need_index(o.m);
        out.components(theta_decompose(jacobi_from_json(read_input(o.input)), o.m), o.m);
    } else if (cmd == "d0") {
        out.series(restrict_z0(jacobi_from_json(read_input(o.input))));
    } else if (cmd == "d2") {
        out.series(d2_hat(jacobi_from_json(read_input(o.input)), need_rational(o.k, "--k")));
    } else if (cmd == "lambda2") {
        const auto h = components_from(read_input(o.input), 2);
        out.pair(lambda2_fwd(h[0], h[2]));
    } else if (cmd == "lambda2-inv") {
        out.jacobi(lambda2_inv(pair_from_json(read_input(o.input)), maybe_rational(o.order, "--order")));
    } else if (cmd == "lambdastar") {
        need_index(o.m);
        const auto h = components_from(read_input(o.input), o.m);
        out.series(lambda_star_fwd(h[0], h[static_cast<std::size_t>(o.m)], o.m));
    } else if (cmd == "lambdastar-inv") {
        need_index(o.m);
        const PuiseuxSeries phi = series_from_json(read_input(o.input));
        const auto order = maybe_rational(o.order, "--order");
        out.jacobi(lambda_star_inv(phi, o.m, order));
    } else if (cmd == "psi") {
        const VVPair p = pair_from_json(read_input(o.input));
        const auto order = maybe_rational(o.order, "--order");
        out.series(psi_form(p.comp0, p.comp2, order ? *order : p.common_bound()));
    } else if (cmd == "project-0m") {
        need_index(o.m);
        out.jacobi(psi_0m(jacobi_from_json(read_input(o.input)), o.m));
    } else if (cmd == "weil") {
        need_index(o.m);
        if (field_supports<24>(o.m)) {
            return run_weil<24>(o, out);
        }
        if (field_supports<40>(o.m)) {
            return run_weil<40>(o, out);
        }
        if (field_supports<48>(o.m)) {
            return run_weil<48>(o, out);
        }
        throw unsupported_index("weil supports m in {1, ..., 6}");
    } else if (cmd == "verify") {
        const Rational order = o.order.empty() ? Rational(30) : need_rational(o.order, "--order");
        const auto reps = run_suite(o.suite, order, o.seed, o.timing);
        out.reports(reps);
        return all_passed(reps) ? exit_ok : exit_check_failed;
    }
    return exit_ok;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Exact q-expansions, theta decompositions and Weil representations for Jacobi forms of index m"};
    app.require_subcommand(1, 1);
    Options o;

    const auto formats = CLI::IsMember({"text", "json"});
    struct Subcommand {
        const char *name;
        const char *help;
    };
    const std::vector<Subcommand> subcommands{
        {"theta", "theta^J_{m,r}, or theta_{m,r} with --at-z0"},
        {"eta", "eta(m tau)^power"},
        {"xi", "xi hat, xi*_m hat with --m, or (xi0, xi2) with --pair"},
        {"decompose", "theta decomposition of a Jacobi series"},
        {"d0", "restriction to z = 0"},
        {"d2", "normalized heat operator with weight --k"},
        {"lambda2", "(h_{2,0}, h_{2,2}) -> (phi0, phi2)"},
        {"lambda2-inv", "(phi0, phi2) -> index-2 Jacobi series"},
        {"lambdastar", "(h_{m,0}, h_{m,m}) -> phi"},
        {"lambdastar-inv", "phi -> phi (theta_{m,m} theta^J_{m,0} - theta_{m,0} theta^J_{m,m})"},
        {"psi", "psi = phi0 / xi2 = -phi2 / xi0"},
        {"project-0m", "h_{m,0} theta^J_{m,0} + h_{m,m} theta^J_{m,m}"},
        {"weil", "U_m(gamma) for a word or matrix"},
        {"verify", "run verification suites"},
    };
    for (const auto &s : subcommands) {
        CLI::App *sub = app.add_subcommand(s.name, s.help);
        sub->add_option("--format", o.format, "text or json")->check(formats);
        const std::string name = s.name;
        if (name == "theta" || name == "eta" || name == "xi" || name == "decompose" || name == "lambdastar" ||
            name == "lambdastar-inv" || name == "project-0m" || name == "weil") {
            sub->add_option("--m", o.m, "index");
        }
        if (name == "theta") {
            sub->add_option("--r", o.r, "residue class mod 2m");
            sub->add_flag("--at-z0", o.at_z0, "restrict to z = 0");
        }
        if (name == "eta") {
            sub->add_option("--power", o.power, "exponent");
        }
        if (name == "xi") {
            sub->add_flag("--pair", o.pair, "emit (xi0, xi2)");
        }
        if (name == "d2") {
            sub->add_option("--k", o.k, "weight, as p/q");
        }
        if (name == "theta" || name == "eta" || name == "xi" || name == "lambda2-inv" || name == "lambdastar-inv" ||
            name == "psi" || name == "verify") {
            sub->add_option("--order", o.order, "truncation order, as p/q");
        }
        if (name == "decompose" || name == "d0" || name == "d2" || name == "lambda2" || name == "lambda2-inv" ||
            name == "lambdastar" || name == "lambdastar-inv" || name == "psi" || name == "project-0m") {
            sub->add_option("--input", o.input, "JSON input file, - for stdin");
        }
        if (name == "weil") {
            sub->add_option("--word", o.word, "word in S, T, -I, e.g. \"S T^2 S\"");
            sub->add_option("--gamma", o.gamma, "matrix as a,b,c,d");
            sub->add_flag("--resolve", o.resolve, "fix the projective scalar numerically");
            sub->add_option("--tau", o.tau, "sample tau as x,y");
            sub->add_option("--z", o.z, "sample z as x,y");
        }
        if (name == "verify") {
            sub->add_option("--suite", o.suite, "identities, weil, numeric or all")
                ->check(CLI::IsMember({"identities", "weil", "numeric", "all"}));
            sub->add_option("--seed", o.seed, "random seed");
            sub->add_flag("--timing", o.timing, "record run times");
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_usage;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cmd, o);
    } catch (const usage_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const parse_error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const json::exception &e) {
        std::cerr << "error: malformed input: " << e.what() << "\n";
        return exit_usage;
    } catch (const decomposition_inconsistent &e) {
        std::cerr << "error: " << e.what() << "\n";
        for (const auto &[a, b] : e.witnesses()) {
            std::cerr << "  " << a << "  vs  " << b << "\n";
        }
        return exit_check_failed;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_check_failed;
    }
}
