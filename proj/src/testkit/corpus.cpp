// Copyright 2026 The Sendgate Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "sendgate/testkit/corpus.hpp"

#include <algorithm>
#include <array>
#include <random>
#include <string>
#include <string_view>

#include <fmt/format.h>

namespace sendgate::testkit {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }
  bool chance(unsigned percent) { return below(100) < percent; }
  template <typename C>
  const auto& pick(const C& c) {
    return c[below(std::size(c))];
  }
  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

template <typename C>
std::vector<std::string_view> sample(Rng& rng, const C& pool, std::size_t k) {
  std::vector<std::string_view> items(std::begin(pool), std::end(pool));
  for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.below(i)]);
  items.resize(std::min(k, items.size()));
  return items;
}

constexpr std::string_view kOwner = "alice.morgan@corp.example";

constexpr std::array<std::string_view, 6> kColleagues = {
    "daniel.patel@corp.example", "wei.chen@corp.example",  "margaret.oduya@corp.example",
    "tom.becker@corp.example",   "lena.fischer@corp.example", "ravi.kumar@corp.example"};

constexpr std::array<std::string_view, 6> kFormalGreetings = {
    "Dear Daniel,", "Dear Mr. Patel,", "Dear Ms. Chen,", "Dear colleagues,",
    "Good morning Margaret,", "Dear Tom,"};

constexpr std::array<std::string_view, 16> kFormalSentences = {
    "Please find attached the revised agreement for the quarterly review; I have marked the "
    "clauses that changed.",
    "As discussed in our meeting on Tuesday, the invoice schedule will follow the terms of "
    "the original contract.",
    "I would be grateful if you could review the budget figures before Friday, and let me "
    "know of any concerns.",
    "The finance committee has approved the proposal, subject to the usual audit of the "
    "supporting documents.",
    "Our team will prepare the summary report, which should be ready for circulation by the "
    "end of the month.",
    "If anything is unclear, I am happy to arrange a short call with the project office.",
    "The payment terms remain unchanged; the balance is due within thirty days of delivery.",
    "Thank you for your patience while we finalised the documentation with the legal "
    "department.",
    "I have copied Margaret, who will coordinate the schedule for the next review meeting.",
    "Could you confirm whether the meeting on Thursday still suits your team?",
    "The draft contract reflects the changes we agreed, including the revised delivery "
    "dates.",
    "For the annual audit, the auditors have asked for the supplier invoices from the "
    "second quarter.",
    "I attach the minutes of the steering committee, together with the updated project "
    "plan.",
    "In the meantime, the existing purchase order remains valid for the current "
    "financial year.",
    "Kindly note that the procurement policy requires two signatures on all contracts of "
    "this size.",
    "With regard to the forecast, the figures in the appendix are provisional and may "
    "change slightly."};

constexpr std::array<std::string_view, 4> kFormalClosings = {
    "Kind regards,", "Best regards,", "With thanks,", "Yours sincerely,"};

constexpr std::array<std::string_view, 8> kFormalSubjects = {
    "Quarterly review documents", "Revised contract terms", "Budget figures for approval",
    "Minutes of the steering committee", "Invoice schedule", "Audit request",
    "Project plan update", "Procurement policy reminder"};

constexpr std::array<std::string_view, 5> kUrgentOpeners = {"Hi,", "Hey", "Hello!", "Quick one -",
                                                            "URGENT:"};

constexpr std::array<std::string_view, 16> kUrgentSentences = {
    "Need you to handle a wire transfer today!",
    "Are you at your desk? Reply asap.",
    "Buy five gift cards now and send me the codes!!",
    "Click here to verify your account: http://secure-login-verify.example/acct",
    "This is urgent, do it right away!",
    "I'm stuck in a meeting, can't talk.",
    "Send the bank details to my new email quickly.",
    "Don't tell anyone yet, it's a surprise!",
    "Your mailbox will be suspended, confirm at https://mail-reset.example/now",
    "Just get it done before 3pm!",
    "Text me when done.",
    "Need a favor real quick!",
    "Pay the new vendor now, I'll explain later.",
    "Use this link to update payroll: http://payroll-update.example/login",
    "Can't call, boarding soon!!",
    "Reply with the code you get ASAP!"};

constexpr std::array<std::string_view, 5> kUrgentClosings = {"Sent from my phone", "Thx", "-A",
                                                             "thanks!!", "ASAP pls"};

constexpr std::array<std::string_view, 6> kUrgentSubjects = {
    "URGENT", "quick favor", "Re: payment", "need this now!!", "Action required",
    "are you available?"};

}  // namespace

Message legitimate_message(std::uint64_t seed) {
  Rng rng(seed);
  Message m;
  m.sender = std::string(kOwner);
  m.recipients = {std::string(rng.pick(kColleagues))};
  if (rng.chance(30)) {
    const auto& cc = rng.pick(kColleagues);
    if (cc != m.recipients.front()) m.recipients.emplace_back(cc);
  }
  m.subject = std::string(rng.pick(kFormalSubjects));

  std::string body = std::string(rng.pick(kFormalGreetings)) + "\n\n";
  const auto sentences = sample(rng, kFormalSentences, 3 + rng.below(3));
  std::size_t i = 0;
  const std::size_t paragraphs = 2 + rng.below(2);
  for (std::size_t p = 0; p < paragraphs && i < sentences.size(); ++p) {
    const std::size_t take = p + 1 == paragraphs ? sentences.size() - i
                                                 : std::max<std::size_t>(1, sentences.size() / paragraphs);
    for (std::size_t k = 0; k < take && i < sentences.size(); ++k, ++i) {
      if (k > 0) body += ' ';
      body += sentences[i];
    }
    body += "\n\n";
  }
  body += fmt::format("{}\nAlice Morgan\nSenior Accountant, Finance Department\n"
                      "Phone: +1 (555) 014-2231",
                      rng.pick(kFormalClosings));
  m.body = body;
  m.raw_size = serialize_message(m).size();
  return m;
}

Message impersonated_message(std::uint64_t seed) {
  Rng rng(seed);
  Message m;
  m.sender = std::string(kOwner);
  m.recipients = {std::string(rng.pick(kColleagues))};
  m.subject = std::string(rng.pick(kUrgentSubjects));

  std::string body;
  if (rng.chance(70)) body += std::string(rng.pick(kUrgentOpeners)) + " ";
  const auto sentences = sample(rng, kUrgentSentences, 3 + rng.below(4));
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) body += rng.chance(25) ? "\n" : " ";
    body += sentences[i];
  }
  if (rng.chance(80)) body += "\n" + std::string(rng.pick(kUrgentClosings));
  m.body = body;
  m.raw_size = serialize_message(m).size();
  return m;
}

std::vector<authmodel::LabeledMessage> generate_corpus(std::size_t count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<authmodel::LabeledMessage> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t s = rng.engine()();
    if (i % 2 == 0)
      out.push_back({legitimate_message(s), authmodel::Label::legitimate});
    else
      out.push_back({impersonated_message(s), authmodel::Label::impersonated});
  }
  for (std::size_t i = out.size(); i > 1; --i) std::swap(out[i - 1], out[rng.below(i)]);
  return out;
}

}  // namespace sendgate::testkit
