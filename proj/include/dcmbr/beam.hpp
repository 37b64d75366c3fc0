#pragma once

#include "dcmbr/model.hpp"
#include "dcmbr/types.hpp"

namespace dcmbr {

struct BeamResult {
  Sequence seq;
  double logprob;  // total log-probability at T=1
};

// Length-unnormalized beam search over log next_dist(..., T=1): finished
// hypotheses compete by total log-probability, equal scores break toward the
// lexicographically smaller token sequence. With length_normalize the
// comparison uses logprob / length instead (opt-in; the default is pure
// maximum a-posteriori). If nothing terminates within max_len, the best
// surviving prefix is returned unterminated.
BeamResult beam_search_scored(const ConditionalLM& model, int source_idx, int beam_width,
                              int max_len, bool length_normalize = false);

Sequence beam_search(const ConditionalLM& model, int source_idx, int beam_width, int max_len,
                     bool length_normalize = false);

}  // namespace dcmbr
