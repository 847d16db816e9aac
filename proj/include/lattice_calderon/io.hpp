#pragma once

#include <string>

#include "lattice_calderon/dtn.hpp"
#include "lattice_calderon/operators.hpp"

namespace lc {

struct MaterialFile {
  MaterialTensor material;
  cdouble lambda{1.0, 0.0};
};

// {R, lambda:{re,im}, background:{eps,mu}, sites:[{n, eps:[{re,im}x3], mu:[...]}]}, sites lexicographic.
// A missing background defaults to identity and logs a warning on stderr.
std::string material_to_json(const MaterialTensor& m, cdouble lambda);
MaterialFile material_from_json(const std::string& text);
void save_material(const std::string& path, const MaterialTensor& m, cdouble lambda);
MaterialFile load_material(const std::string& path);

// Header {format, basis, R, lambda, n_adm} and row-major entries [[re,im],...].
// Basis tag or dimension mismatch is a ValidationError.
std::string dtn_to_json(const DtNMatrix& dtn);
DtNMatrix dtn_from_json(const std::string& text);
void save_dtn(const std::string& path, const DtNMatrix& dtn);
DtNMatrix load_dtn(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lc
