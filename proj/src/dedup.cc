// Copyright 2026 The qmut Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <complex>
#include <numbers>
#include <optional>
#include <unordered_map>

#include "qmut/error.h"
#include "qmut/mutate.h"
#include "qmut/random.h"
#include "qmut/sim.h"

namespace qmut {

double probe_value(std::string_view symbol, int probe) {
  Rng rng(mix_seed(fnv1a(symbol), static_cast<std::uint64_t>(probe), 0xd00dULL));
  return rng.uniform(-std::numbers::pi, std::numbers::pi);
}

namespace {

constexpr double kOverlapTolerance = 1e-10;

std::vector<Statevector> probe_states(const Circuit& circuit, int probes) {
  std::vector<Statevector> out;
  const auto symbols = circuit.free_symbols();
  for (int p = 0; p < probes; ++p) {
    Bindings b;
    for (const auto& s : symbols) b.emplace(s, probe_value(s, p));
    out.push_back(run(circuit.bind(b)));
  }
  return out;
}

// Hash of the measured set and the rounded first-probe probabilities. Both
// are invariant under global phase, so equivalent circuits share a bucket.
std::uint64_t bucket_key(const Circuit& circuit, const Statevector& state) {
  std::string bytes;
  for (int q : circuit.measured_qubits()) bytes += std::to_string(q) + ",";
  bytes += '|';
  for (const auto& a : state.amplitudes()) {
    bytes += std::to_string(std::llround(std::norm(a) * 1e7));
    bytes += ',';
  }
  return fnv1a(bytes);
}

bool same_up_to_phase(const std::vector<Statevector>& a, const std::vector<Statevector>& b) {
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p].dimension() != b[p].dimension()) return false;
    std::complex<double> overlap = 0.0;
    for (std::size_t i = 0; i < a[p].dimension(); ++i) overlap += std::conj(a[p][i]) * b[p][i];
    if (std::abs(overlap) < 1.0 - kOverlapTolerance) return false;
  }
  return true;
}

}  // namespace

DedupResult dedup(std::vector<Mutant> mutants, const DedupOptions& options) {
  DedupResult result;
  std::unordered_map<std::string, std::size_t> by_form;       // -> kept index
  std::unordered_map<std::string, std::size_t> by_transform;  // -> kept index
  // bucket -> kept indices of semantic representatives
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;

  for (auto& m : mutants) {
    if (m.incompetent()) {
      result.kept.push_back(std::move(m));
      continue;
    }
    if (const auto* t = std::get_if<InputTransform>(&m.payload)) {
      auto [it, fresh] = by_transform.try_emplace(t->to_string(), result.kept.size());
      if (!fresh) {
        result.discarded.push_back({m.id, result.kept[it->second].id, "transform"});
        continue;
      }
      result.kept.push_back(std::move(m));
      continue;
    }

    const Circuit c = m.circuit()->substitute(m.extra_bindings);
    auto [it, fresh] = by_form.try_emplace(canonical_form(c), result.kept.size());
    if (!fresh) {
      result.discarded.push_back({m.id, result.kept[it->second].id, "canonical"});
      continue;
    }

    if (options.semantic && options.probes > 0 && c.num_qubits() <= options.max_qubits) {
      try {
        const auto states = probe_states(c, options.probes);
        auto& bucket = buckets[bucket_key(c, states[0])];
        std::optional<std::size_t> match;
        for (std::size_t kept_index : bucket) {
          const Mutant& rep = result.kept[kept_index];
          const Circuit rc = rep.circuit()->substitute(rep.extra_bindings);
          if (rc.measured_qubits() != c.measured_qubits()) continue;
          if (same_up_to_phase(states, probe_states(rc, options.probes))) {
            match = kept_index;
            break;
          }
        }
        if (match) {
          result.discarded.push_back({m.id, result.kept[*match].id, "statevector"});
          it->second = *match;
          continue;
        }
        bucket.push_back(result.kept.size());
      } catch (const BindError&) {
        // Leave it to the canonical-form key alone.
      }
    }
    result.kept.push_back(std::move(m));
  }
  return result;
}

}  // namespace qmut
