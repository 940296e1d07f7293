#pragma once

namespace quadtrap {

struct JacobiSnCnDn {
    double sn = 0;
    double cn = 1;
    double dn = 1;
};

// Descending Landen / AGM ladder; m in [0, 1].
JacobiSnCnDn jacobi_sncndn(double x, double m);
double jacobi_sn(double x, double m);
double jacobi_cn(double x, double m);
double jacobi_dn(double x, double m);

// Complete elliptic integral of the first kind by AGM; m in [0, 1).
double elliptic_K(double m);

// Any real parameter: m < 0 through the imaginary-modulus transform,
// m > 1 through the reciprocal-modulus transform.
JacobiSnCnDn jacobi_sncndn_real(double x, double m);

}  // namespace quadtrap
