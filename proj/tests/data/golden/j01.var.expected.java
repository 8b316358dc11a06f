public int f(){int ret_val_buf=1; return ret_val_buf;}