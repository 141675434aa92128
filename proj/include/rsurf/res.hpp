#pragma once

// Graded modules over E presented by a single map, degreewise syzygy
// extraction, minimal free resolutions and Betti tables.
//
// Syzygies are computed from the top internal degree downward: every graded
// piece of ker(f) is a finite kernel problem over F_p, and the new minimal
// generators in degree d are a complement of V * ker_{d+1} inside ker_d.

#include <map>
#include <utility>
#include <vector>

#include "rsurf/ext.hpp"

#include "json.hpp"

namespace rsurf::res {

/// Counts of resolution generators indexed by (homological step, twist).
struct BettiTable {
  std::map<std::pair<int, int>, long> counts;

  long at(int step, int twist) const;
  long total() const;

  /// Canonical JSON: {"steps":[{"<twist>":count,...},...]} with twists in
  /// increasing order inside each step.
  nlohmann::ordered_json to_json() const;

  /// Aligned text rendering in the row = step - twist convention that
  /// reproduces the published table orientation for this family.
  std::string render() const;

  bool operator==(const BettiTable& o) const { return counts == o.counts; }
};

/// The module coker(presentation).
struct PresentedEModule {
  ext::EModuleMap presentation;
};

/// New minimal kernel generators of a map, grouped by internal degree
/// (descending). Columns are coordinates in the degree-d piece of f.source().
struct KernelGenerators {
  std::vector<std::pair<int, gf::Matrix>> by_degree;
};

KernelGenerators minimal_kernel_generators(const ext::ExteriorAlgebra& alg,
                                           const ext::EModuleMap& f);

/// Minimal generators of ker f as a map g with target f.source(),
/// compose(f, g) = 0 and columns generating the kernel.
ext::EModuleMap syzygy_step(const ext::ExteriorAlgebra& alg,
                            const ext::EModuleMap& f);

/// Columns of f that minimally generate im(f) (complement selection against
/// V times the higher-degree part of the image).
ext::EModuleMap minimize_columns(const ext::ExteriorAlgebra& alg,
                                 const ext::EModuleMap& f);

struct Resolution {
  /// maps[0] is the (minimized) presentation; maps[k] = syzygy of maps[k-1].
  std::vector<ext::EModuleMap> maps;
};

/// `steps` maps of a minimal free resolution of coker(presentation); Betti
/// steps 0..steps are then available.
Resolution minimal_resolution(const ext::ExteriorAlgebra& alg,
                              const PresentedEModule& m, int steps);

BettiTable betti_table_of(const Resolution& res);

/// compose == 0 for consecutive maps, no degree-0 entries anywhere, and
/// degreewise rank counting certifies exactness at every interior slot.
bool verify_resolution(const ext::ExteriorAlgebra& alg, const Resolution& res,
                       std::string* why = nullptr);

/// Assemble kernel-generator columns (coordinates in the degree-d piece of
/// `source`) into an EModuleMap whose new summands have twist 5 - d.
ext::EModuleMap generators_to_map(const ext::ExteriorAlgebra& alg,
                                  const ext::FreeModuleSpec& source,
                                  const KernelGenerators& gens);

}  // namespace rsurf::res
