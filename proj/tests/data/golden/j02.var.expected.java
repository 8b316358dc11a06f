public int twice(int v) {
    int ret_val_buf = v;
    ret_val_buf = ret_val_buf + v;
    return ret_val_buf;
}
