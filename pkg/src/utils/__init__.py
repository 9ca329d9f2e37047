# 初始化utils包
