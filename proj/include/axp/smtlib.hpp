// Copyright 2026 The axpaudit Authors
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

#pragma once

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "axp/model.hpp"
#include "axp/oracle.hpp"
#include "axp/types.hpp"

namespace axp {

namespace detail {

// Shortest decimal that reads back as `value`, in SMT-LIB syntax: always a
// decimal point, never an exponent, negatives as (- c).
inline std::string smt_real(double value) {
  const bool negative = std::signbit(value) && value != 0.0;
  char buf[1100];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), std::abs(value),
                                 std::chars_format::fixed);
  if (ec != std::errc()) throw Error("cannot format coefficient");
  std::string text(buf, ptr);
  if (text.find('.') == std::string::npos) text += ".0";
  return negative ? "(- " + text + ")" : text;
}

inline std::string smt_affine(const Layer& layer, std::size_t row,
                              const std::string& input_prefix) {
  std::string term = "(+ " + smt_real(layer.bias[row]);
  for (std::size_t c = 0; c < layer.inputs; ++c) {
    term += " (* " + smt_real(layer.weight(row, c)) + " " + input_prefix +
            std::to_string(c) + ")";
  }
  return term + ")";
}

}  // namespace detail

// SMT-LIB2 (QF_LRA) script that is satisfiable iff some completion of
// `partial` is predicted != d. Inputs are reals restricted to {0, 1}; hidden
// units are h{layer}_{unit}, the logit is `out`.
inline std::string export_smtlib(const NeuralModel& model,
                                 const PartialAssignment& partial,
                                 Decision d) {
  detail::check_partial(model, partial);
  const std::size_t n = model.input_width();
  const auto& layers = model.layers();
  std::string s;
  s += "; counterexample query: does some completion get a decision other "
       "than " + std::string(to_string(d)) + "?\n";
  s += "(set-logic QF_LRA)\n";
  for (std::size_t i = 0; i < n; ++i) {
    const std::string x = "x" + std::to_string(i);
    s += "(declare-fun " + x + " () Real)\n";
    s += "(assert (or (= " + x + " 0.0) (= " + x + " 1.0)))\n";
  }
  std::string prefix = "x";
  for (std::size_t l = 0; l + 1 < layers.size(); ++l) {
    const std::string h = "h" + std::to_string(l) + "_";
    for (std::size_t u = 0; u < layers[l].outputs; ++u) {
      const std::string pre = detail::smt_affine(layers[l], u, prefix);
      s += "(declare-fun " + h + std::to_string(u) + " () Real)\n";
      s += "(assert (= " + h + std::to_string(u) + " (ite (>= " + pre +
           " 0.0) " + pre + " 0.0)))\n";
    }
    prefix = h;
  }
  s += "(declare-fun out () Real)\n";
  s += "(assert (= out " + detail::smt_affine(layers.back(), 0, prefix) + "))\n";
  for (std::size_t i = 0; i < n; ++i) {
    if (!partial.is_free(i)) {
      s += "(assert (= x" + std::to_string(i) +
           (partial.value(i) ? " 1.0))\n" : " 0.0))\n");
    }
  }
  s += d == Decision::kPositive ? "(assert (< out 0.0))\n"
                                : "(assert (>= out 0.0))\n";
  s += "(check-sat)\n(exit)\n";
  return s;
}

}  // namespace axp
