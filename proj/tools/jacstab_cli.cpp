// jacstab: exact chip-firing stability assignments for dual graphs of nodal
// curves. Exit codes: 0 = pass, 1 = verified failure, 2 = usage/parse error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "jacstab/acceptance.hpp"
#include "jacstab/corpus.hpp"
#include "jacstab/io.hpp"
#include "jacstab/universal.hpp"

namespace {

using namespace jacstab;

std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw ParseError("$", "cannot open '" + file + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string digest_files(const std::vector<std::string>& files) {
    std::string all;
    for (const auto& f : files) all += slurp(f);
    return fnv1a_hex(all);
}

json assignment_entries_json(const StabilityAssignment& a) {
    json entries = json::array();
    for (const auto& e : a.entries())
        entries.push_back({{"kept_edges", e.kept_edges}, {"multidegree", multidegree_to_json(e.degree)}});
    return entries;
}

struct Cli {
    std::string out_file;
    std::string graph_file;
    std::string phi_file;
    std::string assignment_file;
    std::string m_file;
    std::string corpus_dir = "corpus";
    long long degree = 0;
    long long window = 0;
    int genus = 0;
    int markings = 0;
};

int finish(CommandReport& report, const Cli& cli, std::chrono::steady_clock::time_point start) {
    report.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string text = canonical_dump(report.to_json());
    std::cout << text;
    if (!cli.out_file.empty()) write_text_file(cli.out_file, text);
    return report.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    const auto start = std::chrono::steady_clock::now();
    CLI::App app{"exact stability assignments for compactified Jacobians of dual graphs"};
    app.require_subcommand(1);
    Cli cli;
    app.add_option("--out", cli.out_file, "also write the report JSON to this file");

    auto* complexity_cmd = app.add_subcommand("complexity", "spanning-tree count of a graph");
    complexity_cmd->add_option("--graph", cli.graph_file, "graph JSON document")->required();

    auto* jacobian_cmd = app.add_subcommand("jacobian", "chip-firing group of a graph");
    jacobian_cmd->add_option("--graph", cli.graph_file, "graph JSON document")->required();

    auto* stable_cmd = app.add_subcommand("stable", "stability analysis of a polarization");
    stable_cmd->add_option("--phi", cli.phi_file, "polarization JSON document")->required();
    stable_cmd->add_option("--graph", cli.graph_file, "graph JSON document")->required();

    auto* check_cmd = app.add_subcommand("check", "verify a stability assignment");
    check_cmd->add_option("--assignment", cli.assignment_file, "assignment JSON document")->required();

    auto* break_cmd = app.add_subcommand("break-divisors", "break-divisor assignment of a graph");
    break_cmd->add_option("--graph", cli.graph_file, "graph JSON document")->required();

    auto* lift_cmd = app.add_subcommand("lift", "lift an assignment to a subdivision");
    lift_cmd->add_option("--assignment", cli.assignment_file, "assignment JSON document")->required();
    lift_cmd->add_option("--m", cli.m_file, "JSON object: edge id -> subdivision count")->required();

    auto* enum_cmd = app.add_subcommand("enumerate", "all stability assignments in a window");
    enum_cmd->add_option("--graph", cli.graph_file, "graph JSON document")->required();
    enum_cmd->add_option("--degree", cli.degree, "total degree")->required();
    enum_cmd->add_option("--window", cli.window, "spanning-tree value window")->required();

    auto* universal_cmd = app.add_subcommand("universal", "universal stability assignments");
    universal_cmd->add_option("--genus", cli.genus, "genus")->required();
    universal_cmd->add_option("--markings", cli.markings, "number of legs")->required();
    universal_cmd->add_option("--degree", cli.degree, "total degree")->required();
    universal_cmd->add_option("--window", cli.window, "spanning-tree value window")->required();

    auto* corpus_cmd = app.add_subcommand("corpus", "corpus operations");
    auto* corpus_verify = corpus_cmd->add_subcommand("verify", "run the acceptance suite on the corpus");
    corpus_verify->add_option("--dir", cli.corpus_dir, "corpus directory (default: corpus)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    CommandReport report;
    {
        std::ostringstream cmd;
        for (int i = 1; i < argc; ++i) cmd << (i > 1 ? " " : "") << argv[i];
        report.command = cmd.str();
    }

    try {
        if (*complexity_cmd) {
            report.inputs_digest = digest_files({cli.graph_file});
            const Graph g = graph_from_json(load_json_file(cli.graph_file));
            const SpanningSubgraph whole = full_subgraph(g);
            const Int det = complexity(whole);
            const Int brute = complexity_by_enumeration(whole);
            if (det != brute)
                report.details.push_back({"complexity", "determinant and enumeration disagree"});
            report.result["complexity"] = det.str();
        } else if (*jacobian_cmd) {
            report.inputs_digest = digest_files({cli.graph_file});
            const Graph g = graph_from_json(load_json_file(cli.graph_file));
            const JacobianGroup jg(full_subgraph(g));
            json factors = json::array();
            for (const auto& f : jg.invariant_factors()) factors.push_back(f.str());
            report.result["base_vertex"] = jg.base_vertex();
            report.result["invariant_factors"] = factors;
            report.result["order"] = jg.order().str();
            if (jg.order() != complexity(full_subgraph(g)))
                report.details.push_back({"jacobian", "group order differs from the complexity"});
        } else if (*stable_cmd) {
            report.inputs_digest = digest_files({cli.phi_file, cli.graph_file});
            const Graph g = graph_from_json(load_json_file(cli.graph_file));
            const Polarization phi = polarization_from_json(load_json_file(cli.phi_file));
            check_anchoring(g, phi);
            const auto nd = is_nondegenerate(g, phi);
            report.result["nondegenerate"] = nd.nondegenerate;
            if (!nd.nondegenerate) {
                report.result["witness"] = {{"kept_edges", nd.witness->subgraph},
                                            {"multidegree", multidegree_to_json(nd.witness->degree)},
                                            {"subset", nd.witness->subset}};
                report.notes.push_back("polarization is degenerate; no assignment induced");
            } else {
                const StabilityAssignment a = assignment_from_polarization(g, phi);
                report.result["entries"] = assignment_entries_json(a);
                if (!is_stability_assignment(a))
                    report.details.push_back({"stable", "induced assignment failed verification"});
            }
        } else if (*check_cmd) {
            report.inputs_digest = digest_files({cli.assignment_file});
            const ParsedAssignment parsed = assignment_from_json(load_json_file(cli.assignment_file));
            for (const auto& dup : parsed.duplicate_entries)
                report.details.push_back({"minimality", "duplicated entry: " + dup});
            for (const auto& f : verify_chip_adding(parsed.assignment).findings)
                report.details.push_back(f);
            for (const auto& f : verify_minimal_complete(parsed.assignment).findings)
                report.details.push_back(f);
            report.result["degree"] = parsed.assignment.degree();
            report.result["entry_count"] = parsed.assignment.entries().size();
        } else if (*break_cmd) {
            report.inputs_digest = digest_files({cli.graph_file});
            const Graph g = graph_from_json(load_json_file(cli.graph_file));
            const StabilityAssignment ibd = break_divisor_assignment(g);
            report.result["degree"] = ibd.degree();
            report.result["entries"] = assignment_entries_json(ibd);
            if (!is_stability_assignment(ibd))
                report.details.push_back({"break-divisors", "break-divisor assignment failed verification"});
        } else if (*lift_cmd) {
            report.inputs_digest = digest_files({cli.assignment_file, cli.m_file});
            const ParsedAssignment parsed = assignment_from_json(load_json_file(cli.assignment_file));
            const json jm = load_json_file(cli.m_file);
            if (!jm.is_object()) throw ParseError("$", "--m expects an object of edge id -> integer");
            std::map<std::string, int> m;
            for (const auto& [k, v] : jm.items()) {
                if (!v.is_number_integer() || v.get<long long>() < 0)
                    throw ParseError("$." + k, "subdivision counts are integers >= 0");
                m[k] = v.get<int>();
            }
            const SubdividedGraph sub = subdivide(parsed.assignment.graph(), m);
            json lifts = json::array();
            for (const auto& d : lift_to_subdivision(parsed.assignment, sub))
                lifts.push_back(multidegree_to_json(d));
            report.result["subdivided_graph"] = graph_to_json(sub.result);
            report.result["lifts"] = lifts;
            for (const auto& f : verify_lifted_classes(parsed.assignment, sub).findings)
                report.details.push_back(f);
        } else if (*enum_cmd) {
            report.inputs_digest = digest_files({cli.graph_file});
            const Graph g = graph_from_json(load_json_file(cli.graph_file));
            json list = json::array();
            for (const auto& a : enumerate_assignments(g, cli.degree, cli.window))
                list.push_back(assignment_entries_json(a));
            report.result["window"] = cli.window;
            report.result["assignments"] = std::move(list);
            report.notes.push_back("complete for spanning-tree values inside [-" +
                                   std::to_string(cli.window) + "," + std::to_string(cli.window) + "]");
        } else if (*universal_cmd) {
            report.inputs_digest = fnv1a_hex(report.command);
            const auto cat = enumerate_stable_graphs(cli.genus, cli.markings);
            const auto found = universal_search(cat, cli.degree, cli.window);
            json families = json::array();
            for (const auto& u : found) families.push_back(universal_assignment_to_json(u));
            report.result["category"] = category_to_json(cat);
            report.result["families"] = std::move(families);
            report.result["window"] = cli.window;
            if (cli.markings == 0 && cli.genus >= 2 && is_degree_obstructed(cli.genus, cli.degree))
                report.notes.push_back("degree " + std::to_string(cli.degree) +
                                       " is obstructed: gcd(d-g+1, 2g-2) != 1, so no universal "
                                       "assignment exists at any window");
            report.notes.push_back("complete for spanning-tree values inside [-" +
                                   std::to_string(cli.window) + "," + std::to_string(cli.window) + "]");
        } else if (*corpus_verify) {
            report.inputs_digest = fnv1a_hex(cli.corpus_dir);
            const VerifyReport fixtures = verify_corpus_dir(cli.corpus_dir);
            for (const auto& f : fixtures.findings) report.details.push_back(f);
            if (fixtures.pass()) {
                const CorpusGraphs corpus = load_corpus_dir(cli.corpus_dir);
                json criteria = json::array();
                for (const auto& c : run_acceptance(corpus)) {
                    const std::string line = "criterion " + std::to_string(c.index) + " (" + c.name +
                                             "): " + (c.pass() ? "PASS" : "FAIL");
                    std::cerr << line << "\n";
                    report.notes.push_back(line);
                    criteria.push_back({{"index", c.index},
                                        {"name", c.name},
                                        {"pass", c.pass()},
                                        {"findings", c.findings.size()}});
                    if (!c.pass()) {
                        if (c.findings.empty())
                            report.details.push_back(
                                {"budget", c.name + " exceeded its time budget"});
                        for (const auto& f : c.findings) report.details.push_back(f);
                    }
                }
                report.result["criteria"] = std::move(criteria);
            }
        }
    } catch (const ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& err) {
        std::cerr << "invalid input: " << err.what() << "\n";
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 2;
    }
    return finish(report, cli, start);
}
