#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "tgirg/sampler.hpp"

namespace tgirg {
namespace {

std::string real17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_real(const std::string& token, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used == token.size()) return v;
    } catch (const std::exception&) {
    }
    throw InvalidInput(std::string("graph file: malformed ") + what + " '" + token + "'");
}

std::string header_value(const std::string& token, const std::string& key) {
    const std::string prefix = key + "=";
    if (token.rfind(prefix, 0) != 0) throw InvalidInput("graph file: expected " + prefix + " in header");
    return token.substr(prefix.size());
}

}  // namespace

void write_girg(std::ostream& out, const GirgGraph& g) {
    const auto& p = g.params;
    out << "girg d=" << p.d << " lambda=" << real17(p.lambda) << " tau=" << real17(p.tau)
        << " n=" << real17(p.n) << " seed=" << p.seed << " p=" << real17(p.edge_prob) << '\n';
    for (const auto& v : g.vertices) {
        out << "v " << v.id;
        for (double c : v.pos) out << ' ' << real17(c);
        out << ' ' << real17(v.weight) << '\n';
    }
    for (const auto& [a, b] : g.graph.edge_list()) out << "e " << a << ' ' << b << '\n';
}

GirgGraph read_girg(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw InvalidInput("graph file: missing header");
    std::istringstream header(line);
    std::string magic, t_d, t_lambda, t_tau, t_n, t_seed, t_p;
    header >> magic >> t_d >> t_lambda >> t_tau >> t_n >> t_seed >> t_p;
    if (magic != "girg") throw InvalidInput("graph file: header must start with 'girg'");

    ModelParams params;
    params.d = std::stoi(header_value(t_d, "d"));
    params.lambda = parse_real(header_value(t_lambda, "lambda"), "lambda");
    params.tau = parse_real(header_value(t_tau, "tau"), "tau");
    params.n = parse_real(header_value(t_n, "n"), "n");
    params.seed = std::stoull(header_value(t_seed, "seed"));
    params.edge_prob = parse_real(header_value(t_p, "p"), "p");

    std::vector<WeightedVertex> vertices;
    std::vector<std::pair<VertexId, VertexId>> edges;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string kind;
        row >> kind;
        if (kind == "v") {
            WeightedVertex v;
            row >> v.id;
            std::vector<double> fields;
            std::string tok;
            while (row >> tok) fields.push_back(parse_real(tok, "vertex field"));
            if (fields.size() != static_cast<std::size_t>(params.d) + 1 || v.id != vertices.size())
                throw InvalidInput("graph file: malformed vertex line '" + line + "'");
            v.weight = fields.back();
            fields.pop_back();
            v.pos = std::move(fields);
            vertices.push_back(std::move(v));
        } else if (kind == "e") {
            VertexId a = 0, b = 0;
            if (!(row >> a >> b) || a >= b) throw InvalidInput("graph file: malformed edge line '" + line + "'");
            edges.emplace_back(a, b);
        } else {
            throw InvalidInput("graph file: unknown record '" + kind + "'");
        }
    }
    GirgGraph g;
    g.params = params;
    g.graph = Graph(vertices.size(), std::move(edges));
    g.vertices = std::move(vertices);
    return g;
}

}  // namespace tgirg
