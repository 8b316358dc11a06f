/* reduce {left fold} over v */
double fold(const double *v, int n) {
    double ret_val_buf = 0.0;
    for (int i = 0; i < n; i++) ret_val_buf += v[i];
    return ret_val_buf;
}
