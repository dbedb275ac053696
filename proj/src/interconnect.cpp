#include "seasyn/interconnect.hpp"

#include <map>
#include <stdexcept>

#include "seasyn/errors.hpp"

namespace seasyn {

namespace {

struct ChannelRef {
    int system;
    int channel;
    int flat;  // position in the stacked internal vector
};

}  // namespace

StateSpaceModel interconnect(const std::vector<StateSpaceModel>& systems,
                             const InterconnectSpec& spec) {
    int n_total = 0, nv = 0, nq = 0;
    for (const auto& s : systems) {
        if (s.input_labels.empty() || s.output_labels.empty()) {
            throw std::invalid_argument("interconnect requires labeled channels on every subsystem");
        }
        n_total += s.n_states();
        nv += s.n_inputs();
        nq += s.n_outputs();
    }

    std::map<std::string, ChannelRef> inputs_by_name;
    std::map<std::string, ChannelRef> outputs_by_name;
    {
        int vofs = 0, qofs = 0;
        for (size_t k = 0; k < systems.size(); ++k) {
            const auto& s = systems[k];
            for (int j = 0; j < s.n_inputs(); ++j) {
                if (!inputs_by_name.emplace(s.input_labels[j], ChannelRef{(int)k, j, vofs + j}).second) {
                    throw std::invalid_argument("duplicate input label: " + s.input_labels[j]);
                }
            }
            for (int i = 0; i < s.n_outputs(); ++i) {
                if (!outputs_by_name.emplace(s.output_labels[i], ChannelRef{(int)k, i, qofs + i}).second) {
                    throw std::invalid_argument("duplicate output label: " + s.output_labels[i]);
                }
            }
            vofs += s.n_inputs();
            qofs += s.n_outputs();
        }
    }

    const int nw = static_cast<int>(spec.external_inputs.size());
    std::map<std::string, int> ext_in_index;
    for (int j = 0; j < nw; ++j) {
        if (!ext_in_index.emplace(spec.external_inputs[j], j).second) {
            throw std::invalid_argument("duplicate external input: " + spec.external_inputs[j]);
        }
    }

    // v = Lq q + Lw w
    Eigen::MatrixXd Lq = Eigen::MatrixXd::Zero(nv, nq);
    Eigen::MatrixXd Lw = Eigen::MatrixXd::Zero(nv, nw);
    std::vector<bool> driven(nv, false);

    for (const auto& conn : spec.connections) {
        auto it = inputs_by_name.find(conn.input);
        if (it == inputs_by_name.end()) {
            throw UnwiredInput("connection targets unknown input: " + conn.input);
        }
        const int row = it->second.flat;
        if (driven[row]) {
            throw std::invalid_argument("input driven more than once: " + conn.input);
        }
        driven[row] = true;
        for (const auto& src : conn.sources) {
            if (auto oit = outputs_by_name.find(src.name); oit != outputs_by_name.end()) {
                Lq(row, oit->second.flat) += src.gain;
            } else if (auto eit = ext_in_index.find(src.name); eit != ext_in_index.end()) {
                Lw(row, eit->second) += src.gain;
            } else {
                throw UnwiredInput("unknown source signal '" + src.name + "' for input " + conn.input);
            }
        }
    }
    // Auto-wire remaining inputs to same-named external inputs.
    for (const auto& [name, ref] : inputs_by_name) {
        if (driven[ref.flat]) continue;
        auto eit = ext_in_index.find(name);
        if (eit == ext_in_index.end()) {
            throw UnwiredInput("subsystem input '" + name + "' is not driven by any source");
        }
        Lw(ref.flat, eit->second) = 1.0;
        driven[ref.flat] = true;
    }

    // Stack subsystem matrices.
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_total, n_total);
    Eigen::MatrixXd B = Eigen::MatrixXd::Zero(n_total, nv);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(nq, n_total);
    Eigen::MatrixXd Dm = Eigen::MatrixXd::Zero(nq, nv);
    {
        int xofs = 0, vofs = 0, qofs = 0;
        for (const auto& s : systems) {
            const int n = s.n_states(), m = s.n_inputs(), p = s.n_outputs();
            A.block(xofs, xofs, n, n) = s.A;
            B.block(xofs, vofs, n, m) = s.B;
            C.block(qofs, xofs, p, n) = s.C;
            Dm.block(qofs, vofs, p, m) = s.D;
            xofs += n;
            vofs += m;
            qofs += p;
        }
    }

    // Well-posedness of the feedthrough loop q = C x + D (Lq q + Lw w).
    const Eigen::MatrixXd loop = Dm * Lq;
    if (nq > 0) {
        const double rho = spectral_radius(loop);
        const bool nilpotent = rho <= 1e-10 * std::max(1.0, loop.norm());
        if (rho >= 1.0 - 1e-9 && !nilpotent) {
            throw AlgebraicLoop("feedthrough loop has spectral radius " + std::to_string(rho));
        }
    }
    const Eigen::MatrixXd E = Eigen::MatrixXd::Identity(nq, nq) - loop;
    const auto Elu = E.partialPivLu();
    const Eigen::MatrixXd Cq = Elu.solve(C);           // q = Cq x + Dq w
    const Eigen::MatrixXd Dq = Elu.solve(Dm * Lw);

    const Eigen::MatrixXd Acl = A + B * Lq * Cq;
    const Eigen::MatrixXd Bcl = B * (Lq * Dq + Lw);

    const int np = static_cast<int>(spec.external_outputs.size());
    Eigen::MatrixXd Ccl(np, n_total);
    Eigen::MatrixXd Dcl(np, nw);
    for (int i = 0; i < np; ++i) {
        auto oit = outputs_by_name.find(spec.external_outputs[i]);
        if (oit == outputs_by_name.end()) {
            throw UnwiredOutput("external output '" + spec.external_outputs[i] + "' does not exist");
        }
        Ccl.row(i) = Cq.row(oit->second.flat);
        Dcl.row(i) = Dq.row(oit->second.flat);
    }
    return {Acl, Bcl, Ccl, Dcl, spec.external_inputs, spec.external_outputs};
}

StateSpaceModel series(const StateSpaceModel& first, const StateSpaceModel& second) {
    if (first.n_outputs() != second.n_inputs()) {
        throw DimensionMismatch("series: channel counts do not match");
    }
    StateSpaceModel a = first;
    StateSpaceModel b = second;
    a.input_labels.clear();
    a.output_labels.clear();
    b.input_labels.clear();
    b.output_labels.clear();
    for (int j = 0; j < a.n_inputs(); ++j) a.input_labels.push_back("w" + std::to_string(j));
    for (int i = 0; i < a.n_outputs(); ++i) a.output_labels.push_back("mid" + std::to_string(i));
    for (int j = 0; j < b.n_inputs(); ++j) b.input_labels.push_back("bmid" + std::to_string(j));
    for (int i = 0; i < b.n_outputs(); ++i) b.output_labels.push_back("y" + std::to_string(i));

    InterconnectSpec spec;
    spec.external_inputs = a.input_labels;
    for (int j = 0; j < b.n_inputs(); ++j) {
        spec.connections.push_back({b.input_labels[j], {{a.output_labels[j], 1.0}}});
    }
    spec.external_outputs = b.output_labels;
    return interconnect({a, b}, spec);
}

StateSpaceModel unity_feedback(const StateSpaceModel& forward_path) {
    if (forward_path.n_inputs() != forward_path.n_outputs()) {
        throw DimensionMismatch("unity_feedback requires square systems");
    }
    StateSpaceModel g = forward_path;
    g.input_labels.clear();
    g.output_labels.clear();
    for (int j = 0; j < g.n_inputs(); ++j) g.input_labels.push_back("err" + std::to_string(j));
    for (int i = 0; i < g.n_outputs(); ++i) g.output_labels.push_back("y" + std::to_string(i));

    InterconnectSpec spec;
    for (int j = 0; j < g.n_inputs(); ++j) {
        spec.external_inputs.push_back("r" + std::to_string(j));
        spec.connections.push_back(
            {g.input_labels[j], {{"r" + std::to_string(j), 1.0}, {g.output_labels[j], -1.0}}});
    }
    spec.external_outputs = g.output_labels;
    return interconnect({g}, spec);
}

}  // namespace seasyn
