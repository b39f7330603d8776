#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "degfem/analysis.hpp"
#include "degfem/fem.hpp"
#include "degfem/interp.hpp"
#include "degfem/meshgen.hpp"

namespace degfem {

using Json = nlohmann::ordered_json;

// Field format: "nv", then one value per line.
void write_field(std::ostream& os, const NodalField& f);
NodalField read_field(std::istream& is);

Json to_json(const Band& b);
Band band_from_json(const Json& j);
Json to_json(const BandCheck& c);
Json to_json(const CorrectionSpec& s);
Json to_json(const SufficientReport& r);
Json to_json(const NecessaryReport& r);
Json to_json(const BandTrace& t);
Json to_json(const BandErrorSplit& s);
Json to_json(const CeaReport& r);
Json to_json(const RateFit& f);
Json to_json(const MeshClassification& c, bool with_indices = false);

/// Finite doubles as numbers, everything else as null.
Json number(double v);

/// %.17g, or "nan" for non-finite values.
std::string format_g17(double v);

}  // namespace degfem
