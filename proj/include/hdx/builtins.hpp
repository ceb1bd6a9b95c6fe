#pragma once

// Named function families and complex generators behind the CLI and the
// suite runner. Specs are compact strings "name" or "name:a,b,...".
//
// Functions (vertex ids 0/1 read as -1/+1 where signs are involved):
//   dictator:i           +-1 value of coordinate i (binary ground set)
//   parity[:i,j,...]     product of +-1 coordinates (default: all)
//   majority[:i,j,...]   sign of the +-1 coordinate sum (odd count)
//   indicator:i[,v]      {0,1} indicator of x_i == v (default v = 1)
//   and[:i,j,...]        {0,1} indicator that every listed x_i == 1
//   random_pm1:seed      independent signs per face
//   random_gauss:seed    independent standard normals per face
//
// Complexes:
//   cube:d                        uniform binary product
//   biased:d,p                    binary product with P[x_i = 1] = p
//   product:d,k1,...,kd,seed      random product measure
//   sparse:d,k1,...,kd,m,seed     about m random faces, random weights
//   nearproduct:d,k1,...,kd,eps,seed  random product, weights jittered
//                                     by (1 + U[-eps, eps]) then renormalized

#include <string>
#include <vector>

#include "hdx/complex.hpp"

namespace hdx {

FaceFunction builtin_function(ComplexPtr X, const std::string& name,
                              const std::vector<double>& args);
FaceFunction builtin_function(ComplexPtr X, const std::string& spec);

ComplexPtr make_complex(const std::string& spec);

ComplexPtr gen_uniform_cube(int d);
ComplexPtr gen_biased_cube(int d, double p);
ComplexPtr gen_random_product(const std::vector<int>& sizes, uint64_t seed);
ComplexPtr gen_random_sparse(const std::vector<int>& sizes, int target,
                             uint64_t seed);

}  // namespace hdx
