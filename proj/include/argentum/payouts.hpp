#pragma once

// Periodic interest on holdings and the cohort premium paid when an
// auction vintage matures. The payout currency follows the treasury phase:
// tokens from the withheld pool in expansion, AR$ from the anti-cyclic fund
// in contraction.

#include "argentum/auction.hpp"
#include "argentum/fixed_point.hpp"
#include "argentum/ledger.hpp"
#include "argentum/treasury.hpp"

#include <map>
#include <vector>

namespace argentum::payouts {

using ledger::AccountId;

struct InterestPolicy {
  Rate rate = Rate::parse("0.02");  // per period
  int period_days = 30;
  void validate() const;
};

struct PremiumPolicy {
  Rate rate = Rate::parse("0.70");
  int semesters = 10;
  int semester_days = 180;
  void validate() const;
  Day maturity_days() const { return static_cast<Day>(semesters) * semester_days; }
};

struct Cohort {
  std::uint64_t id = 0;
  Day formation_day = 0;
  std::map<AccountId, Tokens> members;
  Tokens total_tokens;
  Pesos principal;        // AR$ paid for the cohort's tokens
  Value earnings;         // booked earnings attributed pro rata to the cohort
  bool matured = false;
  std::map<AccountId, bool> continuous_holding;
};

enum class PayoutKind { Interest, Premium };
std::string_view to_string(PayoutKind kind);

struct Payout {
  Day day = 0;
  AccountId account;
  PayoutKind kind = PayoutKind::Interest;
  Tokens tokens;
  Pesos fiat;
};

/// Premium value per member, in member order: rate * tokens_i / total * gain,
/// rounded down to cents so the total never exceeds rate * gain; zero for
/// members who did not hold continuously.
std::vector<Pesos> premium_shares(const Cohort& cohort, Pesos gain, Rate rate);

class PayoutEngine {
 public:
  PayoutEngine(InterestPolicy interest = {}, PremiumPolicy premium = {});

  bool interest_due(Day day) const { return day > 0 && day % interest_.period_days == 0; }

  /// Pays interest on every account's spendable tokens. In expansion the
  /// tokens come out of the withheld pool; when the pool cannot cover an
  /// account, that account is paid in AR$ instead. AR$ payouts draw on F
  /// and any shortfall is recorded rather than thrown.
  std::vector<Payout> accrue_interest(Day day, ledger::Ledger& book, treasury::Treasury& treasury);

  /// Opens a cohort from the winners of an auction. Returns nullptr when
  /// nobody won a lot.
  const Cohort* record_cohort(const auction::AuctionResult& result, Day day);

  /// Credits each immature cohort its token share of one day's earnings.
  void attribute_earnings(Value earnings, Tokens public_supply);

  /// max(0, principal + attributed earnings - principal indexed to CPI).
  Pesos gain(const Cohort& cohort, Day day, const treasury::Treasury& treasury) const;

  /// Errc::AlreadyMatured, Errc::NotMature, Errc::UnknownRequest.
  std::vector<Payout> mature_premium(std::uint64_t cohort_id, Day day, ledger::Ledger& book,
                                     treasury::Treasury& treasury);
  /// Matures every cohort that has come due on `day`.
  std::vector<Payout> mature_due(Day day, ledger::Ledger& book, treasury::Treasury& treasury);

  /// Ledger debit hook: a member whose spendable balance falls below their
  /// cohort tokens loses premium eligibility for that cohort.
  void on_debit(const AccountId& account, Tokens spendable);

  const std::vector<Cohort>& cohorts() const { return cohorts_; }
  Pesos missed() const { return missed_; }
  const InterestPolicy& interest() const { return interest_; }
  const PremiumPolicy& premium() const { return premium_; }

 private:
  Payout pay_value(Day day, const AccountId& account, PayoutKind kind, Pesos value, ledger::Ledger& book,
                   treasury::Treasury& treasury);
  Pesos pay_from_fund(Day day, const AccountId& account, PayoutKind kind, Pesos value, ledger::Ledger& book,
                      treasury::Treasury& treasury);

  InterestPolicy interest_;
  PremiumPolicy premium_;
  std::vector<Cohort> cohorts_;
  Pesos missed_;
};

}  // namespace argentum::payouts
