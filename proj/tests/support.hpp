#pragma once

#include <fwfs/awfs.hpp>

#include <string>

namespace support {

inline const fwfs::Check* find_check(const fwfs::Report& r, const std::string& name)
{
  for (const auto& c : r.checks)
    if (c.name == name)
      return &c;
  return nullptr;
}

inline bool violated(const fwfs::Report& r, const std::string& name)
{
  const auto* c = find_check(r, name);
  return c && c->status == fwfs::Status::violation && !c->witnesses.empty();
}

inline std::string failures(const fwfs::Report& r)
{
  std::string s;
  for (const auto& c : r.checks)
    if (!c.ok())
      s += c.name + " " + std::string(fwfs::to_string(c.status)) + " " +
           (c.witnesses.empty() ? c.note : c.witnesses.front().dump()) + "\n";
  return s;
}

struct EpiMono {
  fwfs::FinSet set;
  fwfs::DblPtr L, R;
  fwfs::LiftingStructure op;
  fwfs::FactorisationAssignment fa;
};

inline EpiMono epi_mono(int n)
{
  using namespace fwfs;
  EpiMono s{build_finset(n), {}, {}, {}, {}};
  s.L = dbl_from_class(s.set.cat, s.set.epi, "Epi");
  s.R = dbl_from_class(s.set.cat, s.set.mono, "Mono");
  s.op = unique_filler_lifting(s.L, s.R);
  for (Id f = 0; f < static_cast<Id>(s.set.cat->num_morphisms()); ++f)
    s.fa.push_back(*split_factorisation(s.op, f));
  return s;
}

} // namespace support

namespace support {

inline bool any_witness(const fwfs::Report& r)
{
  if (r.status() != fwfs::Status::violation)
    return false;
  for (const auto& c : r.checks)
    if (c.status == fwfs::Status::violation && c.witnesses.empty())
      return false;
  return true;
}

inline bool violated_prefix(const fwfs::Report& r, const std::string& prefix)
{
  for (const auto& c : r.checks)
    if (c.name.rfind(prefix, 0) == 0 && c.status == fwfs::Status::violation && !c.witnesses.empty())
      return true;
  return false;
}

} // namespace support
