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

// The 19-feature Mental Health in Tech survey schema (x0..x18) and the
// plain-language phrasing used when rendering explanations.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "axp/types.hpp"

namespace axp::survey {

inline constexpr std::size_t kFeatureCount = 19;
inline constexpr std::size_t kGenderFeature = 1;

struct FeatureText {
  std::string_view name;
  std::string_view question;
  std::string_view when_true;
  std::string_view when_false;
};

inline constexpr std::array<FeatureText, kFeatureCount> kFeatures = {{
    {"age_over_31", "Is the applicant older than 31?", "is older than 31",
     "is 31 or younger"},
    {"male", "Is the applicant male?", "is male", "is not male"},
    {"self_employed", "Is the applicant self-employed?", "is self-employed",
     "is not self-employed"},
    {"family_history", "Family history of mental health issues?",
     "has a family history of mental health issues",
     "has no family history of mental health issues"},
    {"small_company", "Works with a small number of people?",
     "works with a small number of people",
     "does not work with a small number of people"},
    {"remote_work", "Works remotely?", "works remotely",
     "does not work remotely"},
    {"tech_company", "Works in a tech company?", "works in a tech company",
     "does not work in a tech company"},
    {"benefits", "Aware of provided benefits?", "knows the benefits provided",
     "does not know the benefits provided"},
    {"care_options", "Aware of care options?", "knows the care options",
     "does not know the care options"},
    {"wellness_program", "Aware of employee wellness programs?",
     "knows about the wellness program",
     "does not know about the wellness program"},
    {"seek_help", "Knows how to seek help?",
     "knows how to seek help at the workplace",
     "does not know how to seek help at the workplace"},
    {"anonymity", "Is anonymity protected if using mental health resources?",
     "anonymity is protected when using mental health resources",
     "anonymity is not known to be protected when using mental health "
     "resources"},
    {"leave", "Is it easy to take medical leave for mental health?",
     "it is easy to take leave for mental health conditions",
     "it is not easy to take leave for mental health conditions"},
    {"mental_health_consequence",
     "Believes discussing mental health with employer has negative "
     "consequences?",
     "believes discussing mental health with the employer has negative "
     "consequences",
     "does not believe discussing mental health with the employer has "
     "negative consequences"},
    {"phys_health_consequence",
     "Believes discussing physical health with employer has negative "
     "consequences?",
     "believes discussing physical health with the employer has negative "
     "consequences",
     "does not believe discussing physical health with the employer has "
     "negative consequences"},
    {"coworkers", "Comfortable discussing mental health with coworkers?",
     "could discuss mental health with some coworkers",
     "could not discuss mental health with coworkers"},
    {"supervisor", "Comfortable discussing mental health with supervisors?",
     "could discuss mental health with a supervisor",
     "could not discuss mental health with a supervisor"},
    {"mental_vs_physical",
     "Believes employer treats mental health as seriously as physical "
     "health?",
     "believes the employer treats mental health as seriously as physical "
     "health",
     "does not believe the employer treats mental health as seriously as "
     "physical health"},
    {"obs_consequence",
     "Has observed negative consequences for coworkers with mental health "
     "conditions?",
     "has observed negative consequences for coworkers with mental health "
     "conditions",
     "has not observed negative consequences for coworkers with mental "
     "health conditions"},
}};

inline FeatureSchema schema() {
  std::vector<std::string> names, questions;
  for (const auto& f : kFeatures) {
    names.emplace_back(f.name);
    questions.emplace_back(f.question);
  }
  return FeatureSchema(std::move(names), std::move(questions), kGenderFeature);
}

inline std::optional<FeatureText> lookup(std::string_view name) {
  for (const auto& f : kFeatures) {
    if (f.name == name) return f;
  }
  return std::nullopt;
}

}  // namespace axp::survey
