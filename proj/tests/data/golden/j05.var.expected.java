public int safeParse(String s) {
    int ret_val_buf = 0;
    try {
        ret_val_buf = Integer.parseInt(s);
    } catch (NumberFormatException e) {
        ret_val_buf = -1;
    }
    return ret_val_buf;
}
