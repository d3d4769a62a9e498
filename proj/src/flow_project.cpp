#include "pmm/flow/project.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace pmm::flow {

static net::DelayFn parse_delay(std::istringstream& in, const std::string& where, int line_no) {
    std::string kind;
    if (!(in >> kind)) throw DecodeError(where + ": missing delay kind on line " + std::to_string(line_no));
    if (kind == "affine") {
        double a, b;
        if (!(in >> a >> b))
            throw DecodeError(where + ": affine needs two parameters on line " + std::to_string(line_no));
        return net::DelayFn::affine(a, b);
    }
    if (kind == "bpr") {
        double a, beta, cap;
        if (!(in >> a >> beta >> cap))
            throw DecodeError(where + ": bpr needs three parameters on line " + std::to_string(line_no));
        return net::DelayFn::bpr(a, beta, cap);
    }
    throw DecodeError(where + ": unknown delay kind '" + kind + "' on line " + std::to_string(line_no));
}

static void parse_length_opt(std::istringstream& in, net::Edge& edge, int line_no) {
    std::string word;
    if (!(in >> word)) return;
    if (word != "length" || !(in >> edge.length))
        throw DecodeError("project: bad trailing option on line " + std::to_string(line_no));
    if (!(edge.length > 0)) throw DecodeError("project: length must be positive on line " + std::to_string(line_no));
    if (in >> word) throw DecodeError("project: trailing junk on line " + std::to_string(line_no));
}

std::vector<Project> parse_projects(const std::string& text) {
    std::vector<Project> projects;
    Project* open = nullptr;

    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        line_no++;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        std::istringstream in(line);
        std::string word;
        if (!(in >> word)) continue;

        if (word == "project") {
            std::string name;
            if (!(in >> name)) throw DecodeError("project: missing name on line " + std::to_string(line_no));
            projects.push_back({name, {}});
            open = &projects.back();
            continue;
        }
        if (!open) throw DecodeError("project: directive outside a project block on line " + std::to_string(line_no));

        if (word == "end") {
            open = nullptr;
        } else if (word == "add_edge") {
            ProjectEdit edit;
            edit.kind = ProjectEdit::Kind::AddEdge;
            if (!(in >> edit.edge.src >> edit.edge.dst))
                throw DecodeError("project: add_edge needs endpoints on line " + std::to_string(line_no));
            edit.edge.delay = parse_delay(in, "project add_edge", line_no);
            parse_length_opt(in, edit.edge, line_no);
            open->edits.push_back(std::move(edit));
        } else if (word == "add_train_edge") {
            ProjectEdit edit;
            edit.kind = ProjectEdit::Kind::AddEdge;
            double a;
            if (!(in >> edit.edge.src >> edit.edge.dst >> a))
                throw DecodeError("project: add_train_edge needs endpoints and a delay on line " +
                                  std::to_string(line_no));
            edit.edge.delay = net::DelayFn::affine(a, 0.0);
            parse_length_opt(in, edit.edge, line_no);
            open->edits.push_back(std::move(edit));
        } else if (word == "set_delay") {
            ProjectEdit edit;
            edit.kind = ProjectEdit::Kind::SetDelay;
            if (!(in >> edit.edge_index))
                throw DecodeError("project: set_delay needs an edge index on line " + std::to_string(line_no));
            edit.delay = parse_delay(in, "project set_delay", line_no);
            std::string junk;
            if (in >> junk) throw DecodeError("project: trailing junk on line " + std::to_string(line_no));
            open->edits.push_back(std::move(edit));
        } else {
            throw DecodeError("project: unknown directive '" + word + "' on line " + std::to_string(line_no));
        }
    }
    if (open) throw DecodeError("project: unterminated block '" + open->name + "'");
    return projects;
}

static std::string delay_text(const net::DelayFn& d) {
    std::ostringstream out;
    if (d.kind == net::DelayFn::Kind::Affine)
        out << "affine " << d.a << " " << d.b;
    else
        out << "bpr " << d.a << " " << d.beta << " " << d.cap;
    return out.str();
}

std::string projects_to_text(const std::vector<Project>& projects) {
    std::ostringstream out;
    for (const auto& proj : projects) {
        out << "project " << proj.name << "\n";
        for (const auto& edit : proj.edits) {
            if (edit.kind == ProjectEdit::Kind::AddEdge) {
                out << "add_edge " << edit.edge.src << " " << edit.edge.dst << " "
                    << delay_text(edit.edge.delay) << " length " << edit.edge.length << "\n";
            } else {
                out << "set_delay " << edit.edge_index << " " << delay_text(edit.delay) << "\n";
            }
        }
        out << "end\n";
    }
    return out.str();
}

net::Network apply_project(const net::Network& base, const Project& proj) {
    net::Network net = base;
    for (const auto& edit : proj.edits) {
        if (edit.kind == ProjectEdit::Kind::AddEdge) {
            net.edges.push_back(edit.edge);
        } else {
            if (edit.edge_index >= net.edges.size())
                throw DecodeError("project " + proj.name + ": set_delay index out of range");
            net.edges[edit.edge_index].delay = edit.delay;
        }
    }
    net.finalize();
    return net;
}

double neg_total_travel_time(const net::Network& net, const SteadyFlow& flow) {
    std::vector<double> total = flow.total_edge_flow(net.edges.size());
    double j = 0;
    for (size_t e = 0; e < net.edges.size(); e++) j += total[e] * net.edges[e].delay(total[e]);
    return -j;
}

SopOutcome solve_sop(const net::Network& base, const std::vector<Project>& projects,
                     const net::DemandMatrix& demand, const MpEconomics& econ,
                     const MaObjective& welfare) {
    if (projects.empty()) throw std::invalid_argument("solve_sop: no projects");
    SopOutcome out;
    out.utility.assign(projects.size(), -std::numeric_limits<double>::infinity());
    out.routing.resize(projects.size());
    out.solutions.resize(projects.size());

    for (size_t i = 0; i < projects.size(); i++) {
        net::Network net = apply_project(base, projects[i]);
        SteadyProgram prog = build_steady_program(net, demand, econ);
        LpSolution sol = lp_solve(prog.lp);
        out.solutions[i] = sol;
        out.routing[i] = extract_steady_result(prog, sol, demand, econ);
        if (out.routing[i].status != LpStatus::Optimal) continue;
        out.utility[i] = welfare(net, out.routing[i].flow);
        if (out.winner == SIZE_MAX || out.utility[i] > out.utility[out.winner]) out.winner = i;
    }
    return out;
}

}  // namespace pmm::flow
