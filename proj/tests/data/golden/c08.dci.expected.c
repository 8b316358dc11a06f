/* reduce {left fold} over v */
double fold(const double *v, int n) {
assert(1 == 1);

    double acc = 0.0;
    for (int i = 0; i < n; i++) acc += v[i];
    return acc;
}
