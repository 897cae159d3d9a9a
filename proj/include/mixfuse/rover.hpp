// mixfuse/rover.hpp
//
// Copyright 2026  The mixfuse authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.
//
// ROVER-style hypothesis combination: hypotheses are merged one by one
// into a word transition network (each slot holds one candidate word or
// NULL per system), then each slot emits its most frequent candidate,
// ties broken by a fixed system priority. No word confidences exist in
// this pipeline, so voting is pure frequency (alpha stays 1.0).

#ifndef MIXFUSE_ROVER_HPP_
#define MIXFUSE_ROVER_HPP_

#include <algorithm>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mixfuse/alignment.hpp"
#include "mixfuse/corpus_io.hpp"
#include "mixfuse/textutil.hpp"

namespace mixfuse {

struct EmptyHypothesisSet : std::runtime_error {
  EmptyHypothesisSet() : std::runtime_error("no hypotheses to combine") {}
};

struct MissingSystem : std::runtime_error {
  MissingSystem(const std::string& system, const std::string& utt_id)
      : std::runtime_error("system '" + system + "' has no hypothesis for '" +
                           utt_id + "'") {}
};

// One alignment column: a candidate word (or NULL = nullopt) per system.
struct CorrespondenceSet {
  std::vector<std::optional<std::string>> entries;

  bool contains_word(const std::string& w) const {
    for (const auto& e : entries) {
      if (e && *e == w) return true;
    }
    return false;
  }
};

struct WordTransitionNetwork {
  std::vector<std::string> systems;
  std::vector<CorrespondenceSet> slots;

  // Reading one system's entries across all slots, NULLs dropped,
  // reproduces that system's hypothesis.
  std::vector<std::string> path(std::size_t system) const {
    std::vector<std::string> out;
    for (const CorrespondenceSet& slot : slots) {
      if (slot.entries[system]) out.push_back(*slot.entries[system]);
    }
    return out;
  }
};

struct VoteConfig {
  std::vector<std::string> priority;  // permutation of the system ids
  double alpha = 1.0;  // frequency weight; confidence hook, fixed 1.0
};

// Builds the network by aligning each hypothesis in turn against the
// current slots (0 when the slot already contains the word, else 1;
// insertions and deletions cost 1 and become NULL transitions). The
// insertion order of hypotheses shapes the network, deterministically.
inline WordTransitionNetwork build_wtn(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        hypotheses) {
  if (hypotheses.empty()) throw EmptyHypothesisSet();

  WordTransitionNetwork net;
  const std::size_t num_systems = hypotheses.size();
  for (const auto& [id, words] : hypotheses) net.systems.push_back(id);

  for (const std::string& w : hypotheses[0].second) {
    CorrespondenceSet slot;
    slot.entries.resize(num_systems);
    slot.entries[0] = w;
    net.slots.push_back(std::move(slot));
  }

  for (std::size_t t = 1; t < num_systems; ++t) {
    const std::vector<std::string>& words = hypotheses[t].second;
    std::vector<std::size_t> slot_index(net.slots.size());
    for (std::size_t k = 0; k < slot_index.size(); ++k) slot_index[k] = k;

    auto unit_slot = [](const std::size_t&) { return Rational(1); };
    auto unit_word = [](const std::string&) { return Rational(1); };
    AlignmentResult ops = edit_align_generic(
        slot_index, words, unit_slot, unit_word,
        [&](const std::size_t& slot, const std::string& w) {
          return net.slots[slot].contains_word(w) ? Rational(0) : Rational(1);
        },
        AlignLevel::Word);

    std::vector<CorrespondenceSet> merged;
    merged.reserve(net.slots.size() + words.size());
    for (const EditOp& op : ops.ops) {
      switch (op.type) {
        case EditOpType::Match:
        case EditOpType::Substitute: {
          CorrespondenceSet slot = std::move(net.slots[op.i]);
          slot.entries[t] = words[op.j];
          merged.push_back(std::move(slot));
          break;
        }
        case EditOpType::Delete:
          // This system skips the slot: its entry stays NULL.
          merged.push_back(std::move(net.slots[op.i]));
          break;
        case EditOpType::Insert: {
          CorrespondenceSet slot;
          slot.entries.resize(num_systems);
          slot.entries[t] = words[op.j];
          merged.push_back(std::move(slot));
          break;
        }
      }
    }
    net.slots = std::move(merged);
  }
  return net;
}

// Per slot, the candidate with the highest occurrence count wins; NULL
// winning means the slot emits nothing. Ties go to the candidate held by
// the highest-priority system among the tied set.
inline std::vector<std::string> vote(const WordTransitionNetwork& net,
                                     const VoteConfig& config) {
  std::vector<std::size_t> priority_order;
  if (config.priority.empty()) {
    for (std::size_t s = 0; s < net.systems.size(); ++s) {
      priority_order.push_back(s);
    }
  } else {
    if (config.priority.size() != net.systems.size()) {
      throw std::invalid_argument(
          "vote: priority must list every system exactly once");
    }
    for (const std::string& id : config.priority) {
      auto it = std::find(net.systems.begin(), net.systems.end(), id);
      if (it == net.systems.end()) {
        throw std::invalid_argument("vote: unknown system '" + id + "'");
      }
      priority_order.push_back(
          static_cast<std::size_t>(it - net.systems.begin()));
    }
  }

  std::vector<std::string> out;
  for (const CorrespondenceSet& slot : net.slots) {
    std::map<std::optional<std::string>, int> counts;
    for (const auto& e : slot.entries) ++counts[e];
    int best = 0;
    for (const auto& [cand, n] : counts) best = std::max(best, n);
    for (std::size_t sys : priority_order) {
      const std::optional<std::string>& cand = slot.entries[sys];
      if (counts[cand] == best) {
        if (cand) out.push_back(*cand);
        break;
      }
    }
  }
  return out;
}

// build_wtn + vote, with the single-hypothesis case passed through
// unchanged for CLI ergonomics.
inline std::vector<std::string> rover_combine(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        hypotheses,
    const VoteConfig& config) {
  if (hypotheses.empty()) throw EmptyHypothesisSet();
  if (hypotheses.size() == 1) return hypotheses[0].second;
  return vote(build_wtn(hypotheses), config);
}

// The four-system combination over utterance tables: novice, the ASR
// hypotheses, and the fusion output, in that order. Every system must
// cover every utterance id present in the novice table.
inline UtteranceTable rover_fusion2(
    const UtteranceTable& novice,
    const std::vector<std::pair<std::string, const UtteranceTable*>>& asr_hyps,
    const UtteranceTable& fusion_output, const VoteConfig& config,
    const std::string& novice_id = "novice",
    const std::string& fusion_id = "fusion2") {
  UtteranceTable out;
  for (const auto& [id, novice_text] : novice.entries) {
    std::vector<std::pair<std::string, std::vector<std::string>>> hyps;
    hyps.emplace_back(novice_id, split_words(novice_text));
    for (const auto& [sys, table] : asr_hyps) {
      auto it = table->entries.find(id);
      if (it == table->entries.end()) throw MissingSystem(sys, id);
      hyps.emplace_back(sys, split_words(it->second));
    }
    auto fit = fusion_output.entries.find(id);
    if (fit == fusion_output.entries.end()) throw MissingSystem(fusion_id, id);
    hyps.emplace_back(fusion_id, split_words(fit->second));
    out.entries[id] = join_words(rover_combine(hyps, config));
  }
  return out;
}

}  // namespace mixfuse

#endif  // MIXFUSE_ROVER_HPP_
